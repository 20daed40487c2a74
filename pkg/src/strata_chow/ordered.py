"""Classes of ordered strata Delta_P in A_T((P^1)^n).

Besides the class constructors this module holds the rewriting engine that
expresses arbitrary strata (and products of diagonals) in terms of good
partitions, the basis decomposition of a class, and the square-relation
certificates that justify each rewrite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .partitions import (SetPartition, enumerate_set_partitions, good_partitions,
                         is_good)
from .poly import UV, U, V, NotDivisible, Poly, u_minus_v_power
from .rings import SCHEMA, OrderedClass, indices_of, mask_of


class NotInSpan(ArithmeticError):
    """The class is not an integer combination of the requested strata basis."""


def delta_ij(i: int, j: int, n: int) -> OrderedClass:
    if i == j:
        raise ValueError("Delta_{i,j} needs i != j")
    return OrderedClass.H(i, n) + OrderedClass.H(j, n) + (U + V)


def psi(i: int, n: int) -> OrderedClass:
    return -(OrderedClass.H(i, n) * 2 + (U + V))


@lru_cache(maxsize=None)
def _delta_P(P: SetPartition) -> OrderedClass:
    n = P.n
    num = OrderedClass.one(n)
    for part in P.parts:
        # prod (H_j + u) - prod (H_j + v) = sum_S H_S (u^m - v^m), m = |V| - |S|
        pmask = mask_of(part)
        factor = {}
        sub = pmask
        while True:
            m = len(part) - bin(sub).count("1")
            c = U ** m - V ** m
            if c:
                factor[sub] = c
            if sub == 0:
                break
            sub = (sub - 1) & pmask
        num = num * OrderedClass(n, factor)
    return num.exact_div(u_minus_v_power(P.d))


def delta_P(P: SetPartition) -> OrderedClass:
    return _delta_P(P)


def spanning_forest_product(P: SetPartition, forest: Iterable[tuple[int, int]] | None = None) -> OrderedClass:
    """Product of Delta_{i,j} over a spanning forest of P (default: sorted paths)."""
    if forest is None:
        forest = [(p[t], p[t + 1]) for p in P.parts for t in range(len(p) - 1)]
    forest = list(forest)
    if len(forest) != P.n - P.d:
        raise ValueError("a spanning forest of P has n - d edges")
    out = OrderedClass.one(P.n)
    for i, j in forest:
        if not P.same_part(i, j):
            raise ValueError(f"edge ({i},{j}) leaves its part")
        out = out * delta_ij(i, j, P.n)
    return out


def _check_square(P: SetPartition, idx: Sequence[int]):
    if len(idx) != 4:
        raise ValueError("a square relation takes four indices")
    blocks = {P.block_index(x) for x in idx}
    if len(blocks) != 4:
        raise ValueError(f"indices {tuple(idx)} are not in four distinct parts of {P}")


def square_relation_terms(P: SetPartition, i: int, j: int, k: int, l: int) -> dict[SetPartition, int]:
    """Formal relation P_ij - P_jk + P_kl - P_li."""
    _check_square(P, (i, j, k, l))
    out: dict[SetPartition, int] = {}
    for (a, b), s in (((i, j), 1), ((j, k), -1), ((k, l), 1), ((l, i), -1)):
        Q = P.merge(a, b)
        out[Q] = out.get(Q, 0) + s
    return {Q: c for Q, c in out.items() if c}


def square_relation_class(P: SetPartition, i: int, j: int, k: int, l: int) -> OrderedClass:
    total = OrderedClass.zero(P.n)
    for Q, c in square_relation_terms(P, i, j, k, l).items():
        total = total + delta_P(Q) * c
    return total


# ---------------------------------------------------------------------------

class StrataCombinationOrdered:
    """Integer combination sum c_P Delta_P over set partitions of [n]."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[SetPartition, int] | None = None, homogeneous: bool = False):
        self.n = n
        clean = {}
        for P, c in (terms or {}).items():
            if P.n != n:
                raise ValueError(f"{P} is not a partition of [{n}]")
            if c:
                clean[P] = clean.get(P, 0) + c
        self.terms = {P: c for P, c in clean.items() if c}
        if homogeneous and len({P.d for P in self.terms}) > 1:
            raise ValueError("mixed numbers of parts in a homogeneous combination")

    @classmethod
    def single(cls, P: SetPartition, c: int = 1) -> "StrataCombinationOrdered":
        return cls(P.n, {P: c})

    def __add__(self, other: "StrataCombinationOrdered"):
        out = dict(self.terms)
        for P, c in other.terms.items():
            out[P] = out.get(P, 0) + c
        return StrataCombinationOrdered(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: int) -> "StrataCombinationOrdered":
        return StrataCombinationOrdered(self.n, {P: x * c for P, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, StrataCombinationOrdered) and self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def map_partitions(self, f, n: int) -> "StrataCombinationOrdered":
        out: dict[SetPartition, int] = {}
        for P, c in self.terms.items():
            Q = f(P)
            out[Q] = out.get(Q, 0) + c
        return StrataCombinationOrdered(n, out)

    def evaluate(self) -> OrderedClass:
        total = OrderedClass.zero(self.n)
        for P, c in self.terms.items():
            total = total + delta_P(P) * c
        return total

    def items(self):
        return sorted(self.terms.items(), key=lambda it: (it[0].d, it[0].parts))

    def __str__(self):
        out = []
        for P, c in self.items():
            body = f"D[{P}]" if abs(c) == 1 else f"{abs(c)}*D[{P}]"
            if not out:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(out) or "0"

    def __repr__(self):
        return f"StrataCombinationOrdered(n={self.n}, {self})"

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "type": "StrataCombinationOrdered", "n": self.n,
                "terms": [{"partition": P.to_json(), "coeff": str(c)} for P, c in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "StrataCombinationOrdered":
        n = int(data["n"])
        return cls(n, {SetPartition(t["partition"], n): int(t["coeff"]) for t in data["terms"]})


@dataclass
class SquareRelationCertificate:
    """Steps (P, (i, j, k, l), m): add m times the square relation of P."""

    steps: list[tuple[SetPartition, tuple[int, int, int, int], int]] = field(default_factory=list)

    def __post_init__(self):
        for P, idx, _ in self.steps:
            _check_square(P, idx)

    def __len__(self):
        return len(self.steps)

    def extend(self, other: "SquareRelationCertificate", scale: int = 1, lift=None):
        for P, idx, m in other.steps:
            self.steps.append((lift(P) if lift else P, idx, m * scale))

    def relation_sum(self, n: int) -> StrataCombinationOrdered:
        total: dict[SetPartition, int] = {}
        for P, idx, m in self.steps:
            for Q, c in square_relation_terms(P, *idx).items():
                total[Q] = total.get(Q, 0) + c * m
        return StrataCombinationOrdered(n, total)

    def replay(self, start: StrataCombinationOrdered, result: StrataCombinationOrdered) -> bool:
        """True iff start plus the certified relations is formally equal to result."""
        return start + self.relation_sum(start.n) == result

    def to_json(self) -> list:
        return [{"partition": P.to_json(), "indices": list(idx), "multiplier": str(m)} for P, idx, m in self.steps]

    @classmethod
    def from_json(cls, data: list, n: int) -> "SquareRelationCertificate":
        return cls([(SetPartition(s["partition"], n), tuple(s["indices"]), int(s["multiplier"])) for s in data])


# ---------------------------------------------------------------------------
# Rewriting into good partitions

def _goodify(Q: SetPartition) -> tuple[StrataCombinationOrdered, SquareRelationCertificate]:
    n, d = Q.n, Q.d
    if d == 2 or is_good(Q):
        return StrataCombinationOrdered.single(Q), SquareRelationCertificate()
    if Q.same_part(n - 1, n):
        combo, cert = _goodify(Q.without(n))
        lift = lambda P: P.add_to_part_of(n, n - 1)
        out = SquareRelationCertificate()
        out.extend(cert, 1, lift)
        return combo.map_partitions(lift, n), out
    if Q.part_of(n) == (n,):
        combo, cert = _goodify(Q.without(n))
        lift = lambda P: P.add_singleton(n)
        out = SquareRelationCertificate()
        out.extend(cert, 1, lift)
        return combo.map_partitions(lift, n), out
    # n shares its part with x but not with n-1: isolate n and use the square
    # relation of (n-1, n, x, y), which trades Q for three easier partitions.
    x = min(e for e in Q.part_of(n) if e != n)
    bad = {Q.block_index(n - 1), Q.block_index(n)}
    y = min(e for e in range(1, n + 1) if Q.block_index(e) not in bad)
    Qt = SetPartition([[e for e in p if e != n] for p in Q.parts if p != (n,)] + [[n]], n)
    cert = SquareRelationCertificate([(Qt, (n - 1, n, x, y), 1)])
    combo = StrataCombinationOrdered(n)
    for T, c in ((Qt.merge(n - 1, n), 1), (Qt.merge(x, y), 1), (Qt.merge(y, n - 1), -1)):
        sub, sub_cert = _goodify(T)
        combo = combo + sub.scale(c)
        cert.extend(sub_cert, c)
    return combo, cert


def goodify(Q: SetPartition, verify: bool = True) -> tuple[StrataCombinationOrdered, SquareRelationCertificate]:
    """Write Delta_Q as an integer combination of good strata with the same number of parts."""
    if not 2 <= Q.d <= Q.n:
        raise ValueError(f"goodify needs at least two parts, got {Q}")
    combo, cert = _goodify(Q)
    if verify:
        if not cert.replay(StrataCombinationOrdered.single(Q), combo):
            raise AssertionError(f"certificate for {Q} does not replay")
        if combo.evaluate() != delta_P(Q):
            raise AssertionError(f"goodify({Q}) changed the class")
    return combo, cert


def product_to_strata(edges: Sequence[tuple[int, int]], n: int, verify: bool = True) -> StrataCombinationOrdered:
    """Rewrite prod Delta_{i,j} as an integer combination of Delta_P with n - #edges parts."""
    k = len(edges)
    if k > n - 2:
        raise ValueError(f"{k} factors exceed n - 2 = {n - 2}; use the high-degree basis")
    combo = StrataCombinationOrdered.single(SetPartition.singletons(n))
    for i, j in edges:
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"bad edge ({i},{j})")
        out: dict[SetPartition, int] = {}
        for P, c in combo.terms.items():
            if not P.same_part(i, j):
                moves = [(P.merge(i, j), 1)]
            else:
                home = P.block_index(i)
                others = [p for t, p in enumerate(P.parts) if t != home]
                x2, x3 = others[0][0], others[1][0]
                # Delta_ij = Delta_{i,x2} - Delta_{x2,x3} + Delta_{x3,j} as linear forms
                moves = [(P.merge(i, x2), 1), (P.merge(x2, x3), -1), (P.merge(x3, j), 1)]
            for Q, s in moves:
                out[Q] = out.get(Q, 0) + c * s
        combo = StrataCombinationOrdered(n, out)
    if verify:
        prod = OrderedClass.one(n)
        for i, j in edges:
            prod = prod * delta_ij(i, j, n)
        if combo.evaluate() != prod:
            raise AssertionError("product_to_strata changed the class")
    return combo


# ---------------------------------------------------------------------------
# Decomposition in the good basis

def pr_pushforward(alpha: OrderedClass, i: int) -> OrderedClass:
    return alpha.pushforward(i)


def fixed_point_values(A: Iterable[int], n: int) -> dict[int, Poly]:
    A = set(A)
    return {i: (-U if i in A else -V) for i in range(1, n + 1)}


def _integer_quotient(p: Poly, q: Poly) -> int:
    try:
        r = p.exact_div(q)
    except NotDivisible as exc:
        raise NotInSpan(str(exc)) from exc
    if not r.is_constant() or not r.is_integral():
        raise NotInSpan(f"{p} / {q} is not an integer")
    return r.constant_term()


def _decompose_low(alpha: OrderedClass, d: int) -> dict[SetPartition, int]:
    n = alpha.n
    if d == n:
        c = alpha.constant()
        if any(alpha.coeffs.keys() - {0}):
            raise NotInSpan("degree-0 class is not constant")
        if not c.is_constant() or not c.is_integral():
            raise NotInSpan(f"{c} is not an integer")
        return {SetPartition.singletons(n): c.constant_term()} if c else {}
    if d == 2:
        out = {}
        for P in enumerate_set_partitions(2, n):
            A = P.parts[0]
            val = alpha.evaluate(fixed_point_values(A, n))
            unit = u_minus_v_power(n - 2) * (1 if len(A) % 2 else -1)
            a = _integer_quotient(val, unit)
            if a:
                out[P] = a
        return out
    out: dict[SetPartition, int] = {}
    beta1 = alpha.pushforward(n)
    if beta1:
        for P, c in _decompose_low(beta1, d).items():
            Q = P.add_to_part_of(n, n - 1)
            out[Q] = out.get(Q, 0) + c
    beta2 = (alpha * (OrderedClass.H(n, n) - OrderedClass.H(n - 1, n))).pushforward(n)
    if beta2:
        for P, c in _decompose_low(beta2, d - 1).items():
            Q = P.add_singleton(n)
            out[Q] = out.get(Q, 0) + c
    return {P: c for P, c in out.items() if c}


def high_degree_pair(P: SetPartition) -> tuple[int, int]:
    """(i_P, j_P): the two smallest elements of the first part with at least two elements."""
    for p in P.parts:
        if len(p) >= 2:
            return p[0], p[1]
    raise ValueError(f"{P} has no part of size two or more")


def high_degree_basis_class(P: SetPartition, k: int) -> OrderedClass:
    """Basis element of degree k >= n-1 labelled by P in Part(2, n) or the one-part partition."""
    n = P.n
    if P.d == 2:
        i, j = high_degree_pair(P)
        return delta_P(P) * delta_ij(i, j, n) ** (k - n + 2)
    if P.d == 1:
        return delta_P(P) * delta_ij(1, 2, n) ** (k - n + 1)
    raise ValueError("high-degree basis is labelled by partitions with one or two parts")


def _decompose_high(alpha: OrderedClass, k: int) -> dict[SetPartition, int]:
    n = alpha.n
    if n < 3:
        raise ValueError("the high-degree basis needs n >= 3")
    out = {}
    residual = alpha
    for P in enumerate_set_partitions(2, n):
        A, B = P.parts
        i, j = high_degree_pair(P)
        m = k - n + 2
        unit = u_minus_v_power(n - 2) * (1 if len(A) % 2 else -1)
        unit = unit * ((V - U) ** m if i in A else (U - V) ** m)
        a = _integer_quotient(alpha.evaluate(fixed_point_values(A, n)), unit)
        if a:
            out[P] = a
            residual = residual - high_degree_basis_class(P, k) * a
    if residual:
        top = SetPartition([range(1, n + 1)], n)
        basis = high_degree_basis_class(top, k)
        mask, c = max(basis.coeffs.items(), key=lambda it: (bin(it[0]).count("1"), it[0]))
        a = _integer_quotient(residual.coefficient(mask), c)
        if a:
            out[top] = a
    return out


def decompose(alpha: OrderedClass, k: int | None = None) -> StrataCombinationOrdered:
    """Coefficients of alpha in the strata basis of its degree; raise NotInSpan if there are none.

    For k <= n-2 the basis is {Delta_P : P good with n-k parts}; above that it is
    the basis of high-degree products (see :func:`high_degree_basis_class`).
    """
    n = alpha.n
    if k is None:
        k = max(alpha.degree(), 0)
    if not alpha.is_homogeneous(k):
        raise NotInSpan(f"class is not homogeneous of degree {k}")
    if k <= n - 2 or n <= 1:
        coeffs = _decompose_low(alpha, n - k) if alpha else {}
        combo = StrataCombinationOrdered(n, coeffs)
        if combo.evaluate() != alpha:
            raise NotInSpan("class is not an integer combination of good strata")
        return combo
    coeffs = _decompose_high(alpha, k) if alpha else {}
    total = OrderedClass.zero(n)
    for P, c in coeffs.items():
        total = total + high_degree_basis_class(P, k) * c
    if total != alpha:
        raise NotInSpan("class is not an integer combination of the high-degree basis")
    return StrataCombinationOrdered(n, coeffs)


def chain_orbit_class(n: int) -> StrataCombinationOrdered:
    """sum_{a=1}^{n-2} Delta_{{1..a},{a+1},{a+2..n}}."""
    terms = {}
    for a in range(1, n - 1):
        P = SetPartition([range(1, a + 1), [a + 1], range(a + 2, n + 1)], n)
        terms[P] = terms.get(P, 0) + 1
    return StrataCombinationOrdered(n, terms)
