"""Unordered strata Z_lambda in A_T(P^n) = A_T(Sym^n P^1).

Classes are pushed forward along the (weighted) multiplication map
(P^1)^d -> P^n using the torus-fixed basis {H_i + u, H_i + v} of each factor.
The module also contains the [a, b, 1^c] basis, the relation checker with
rewriting certificates, affine (H^0) parts and their reconstruction, and the
two multiplicative identities for (u+v) and uv.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .partitions import IntPartition, enumerate_int_partitions
from .poly import (UV, E1, E2, U, V, NotDivisible, Poly, PolyRing, format_terms,
                   u_minus_v_power, upoly_exact_div, upoly_mul)
from .rings import SCHEMA, OrderedClass, ProjClass, indices_of, point_class


class DenominatorResidue(ArithmeticError):
    """Reconstruction left non-integral coefficients."""


class IdentityFailure(AssertionError):
    """A claimed polynomial identity does not hold."""


# ---------------------------------------------------------------------------
# Pullback and pushforward along the multiplication map

def phi_pullback(beta: ProjClass) -> OrderedClass:
    """Substitute H -> H_1 + ... + H_n."""
    n = beta.n
    s = OrderedClass.zero(n)
    for i in range(1, n + 1):
        s = s + OrderedClass.H(i, n)
    out = OrderedClass.zero(n)
    power = OrderedClass.one(n)
    for c in beta.coeffs:
        if c:
            out = out + power * c
        power = power * s
    return out


def _zpoly_sum(acc: dict, poly: dict, scale: Poly):
    for k, c in poly.items():
        t = c * scale
        acc[k] = acc[k] + t if k in acc else t


def _fixed_point_combination(coeffs: Mapping[int, Poly], total: int) -> ProjClass:
    out = [UV.zero] * (total + 1)
    for k, c in coeffs.items():
        if c:
            for i, p in enumerate(point_class(k, total)):
                if p:
                    out[i] = out[i] + c * p
    return ProjClass(total, out)


def phi_pushforward(alpha: OrderedClass, weights: Sequence[int] | None = None,
                    target_n: int | None = None) -> ProjClass:
    """Pushforward along (D_1..D_d) -> sum w_i D_i from (P^1)^d to P^{sum w_i}."""
    d = alpha.n
    weights = list(weights) if weights is not None else [1] * d
    if len(weights) != d:
        raise ValueError(f"{len(weights)} weights for {d} factors")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    N = sum(weights)
    if target_n is not None and target_n != N:
        raise ValueError(f"target n={target_n} differs from the weight sum {N}")
    # In the basis X_i = H_i + u, Y_i = H_i + v:  (u - v) H_i = u Y_i - v X_i and
    # (u - v) = X_i - Y_i.  A monomial prod_A X prod_{A^c} Y lands on the fixed
    # point with index sum_{i in A} w_i; track that index as a power of z.
    acc: dict[int, Poly] = {}
    for mask, c in alpha.coeffs.items():
        zp: dict[int, Poly] = {0: c}
        for i in range(d):
            w = weights[i]
            if mask >> i & 1:
                f = ((w, -V), (0, U))
            else:
                f = ((w, UV.one), (0, -UV.one))
            new: dict[int, Poly] = {}
            for k, a in zp.items():
                for s, b in f:
                    t = a * b
                    new[k + s] = new[k + s] + t if k + s in new else t
            zp = new
        for k, a in zp.items():
            acc[k] = acc[k] + a if k in acc else a
    try:
        return _fixed_point_combination(acc, N).exact_div(u_minus_v_power(d))
    except NotDivisible as exc:
        raise NotDivisible("pushforward is not polynomial") from exc


def _zproduct(parts: Sequence[int]) -> list[int]:
    """Coefficients of prod (z^a - 1)."""
    out = [1]
    for a in parts:
        f = [-1] + [0] * (a - 1) + [1]
        out = upoly_mul(out, f)
    return out


@lru_cache(maxsize=None)
def class_unordered(lam: IntPartition) -> ProjClass:
    """[lambda] = (prod e_i!) [Z_lambda]."""
    coeffs = _zproduct(lam.parts)
    return _fixed_point_combination({k: UV.const(c) for k, c in enumerate(coeffs) if c}, lam.n) \
        .exact_div(u_minus_v_power(lam.d))


def class_Z(lam: IntPartition) -> ProjClass:
    """[Z_lambda] itself (integral)."""
    return class_unordered(lam).exact_div(lam.normalization())


def ab_partition(k1: int, k2: int, ones: int) -> IntPartition:
    return IntPartition([k1, k2] + [1] * ones)


def ab1_decompose(lam: IntPartition, verify: bool = True) -> dict[tuple[int, int], int]:
    """Integer coefficients of [lambda] on the classes [k2, k1, 1^{d-2}], keyed (k1, k2), k1 <= k2."""
    d, n = lam.d, lam.n
    if d < 2:
        raise ValueError("needs at least two parts")
    num = _zproduct(lam.parts)
    q = upoly_exact_div(num, _zproduct([1] * (d - 2)))
    q = [-c for c in q]
    m = n - d + 2
    q += [0] * (m + 1 - len(q))
    out = {}
    for k1 in range(1, m // 2 + 1):
        k2 = m - k1
        c = q[k1]
        if k1 == k2:
            if c % 2:
                raise IdentityFailure(f"middle coefficient {c} of {lam} is odd")
            c //= 2
        if c:
            out[(k1, k2)] = c
    if verify:
        total = ProjClass.zero(n)
        for (k1, k2), c in out.items():
            total = total + class_unordered(ab_partition(k1, k2, d - 2)) * c
        if total != class_unordered(lam):
            raise IdentityFailure(f"[a,b,1^c] decomposition of {lam} does not verify")
    return out


# ---------------------------------------------------------------------------
# Relations between unordered strata

class StrataCombinationUnordered:
    """sum a_lambda [Z_lambda] with rational coefficients against the unnormalized classes."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[IntPartition, object] | None = None, homogeneous: bool = False):
        self.n = n
        out: dict[IntPartition, Fraction] = {}
        for lam, c in (terms or {}).items():
            if lam.n != n:
                raise ValueError(f"{lam} is not a partition of {n}")
            out[lam] = out.get(lam, Fraction(0)) + Fraction(c)
        self.terms = {lam: c for lam, c in out.items() if c}
        if homogeneous and len({lam.d for lam in self.terms}) > 1:
            raise ValueError("mixed numbers of parts in a homogeneous combination")

    _TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?\*?(\[[^\]]*\])")

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "StrataCombinationUnordered":
        """Parse "1*[4,1,1]+3*[2,2,2]-1*[3,2,1] @ n=6"."""
        body, _, tail = text.partition("@")
        if tail:
            mt = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*", tail)
            if not mt:
                raise ValueError(f"cannot parse {tail!r}; expected '@ n=N'")
            tn = int(mt.group(1))
            if n is not None and n != tn:
                raise ValueError(f"conflicting n: {n} and {tn}")
            n = tn
        body = re.sub(r"\s+", "", body)
        terms: dict[IntPartition, Fraction] = {}
        pos = 0
        while pos < len(body):
            m = cls._TERM.match(body, pos)
            if not m or (pos and not m.group(1)):
                raise ValueError(f"cannot parse relation near {body[pos:]!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            lam = IntPartition.parse(m.group(3))
            terms[lam] = terms.get(lam, 0) + sign * coef
            pos = m.end()
        if not terms:
            raise ValueError("empty relation")
        ns = {lam.n for lam in terms}
        if n is None:
            if len(ns) != 1:
                raise ValueError("partitions of different integers")
            n = ns.pop()
        return cls(n, terms)

    def normalized(self) -> dict[IntPartition, Fraction]:
        """Coefficients on the classes [lambda] = (prod e_i!) [Z_lambda]."""
        return {lam: c / lam.normalization() for lam, c in self.terms.items()}

    def z_polynomials(self) -> dict[int, list[Fraction]]:
        """Nonzero z-polynomials, one per number of parts d.

        The criterion compares classes of the same codimension n - d, so each d is tested separately.
        """
        out: dict[int, list[Fraction]] = {}
        for lam, c in self.normalized().items():
            total = out.setdefault(lam.d, [])
            p = _zproduct(lam.parts)
            total += [Fraction(0)] * (len(p) - len(total))
            for i, x in enumerate(p):
                total[i] += c * x
        for d in list(out):
            while out[d] and not out[d][-1]:
                out[d].pop()
            if not out[d]:
                del out[d]
        return out

    def evaluate(self) -> ProjClass:
        """sum a_lambda [Z_lambda] as a (rational) ProjClass."""
        total = ProjClass.zero(self.n)
        for lam, c in self.normalized().items():
            total = total + class_unordered(lam) * c
        return total

    def items(self):
        return sorted(self.terms.items(), key=lambda it: (it[0].d, tuple(-a for a in it[0].parts)))

    def __str__(self):
        out = []
        for lam, c in self.items():
            a = abs(c)
            body = f"{a}*{lam}"
            if not out:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f" - {body}" if c < 0 else f" + {body}")
        return ("".join(out) or "0") + f" @ n={self.n}"

    def __repr__(self):
        return f"StrataCombinationUnordered({self})"

    def to_json(self):
        return {"schema": SCHEMA, "type": "StrataCombinationUnordered", "n": self.n,
                "terms": [{"partition": lam.to_json(), "coeff": str(c)} for lam, c in self.items()]}


def is_ab1(lam: IntPartition) -> bool:
    return lam.d < 3 or lam.parts[2] == 1


def square_move(lam: IntPartition) -> tuple[IntPartition, IntPartition, IntPartition]:
    """[lam] = [lam1] + [lam2] - [lam3] for lam with third part > 1 (third part split as 1 + rest)."""
    a1, a2, a3, *rest = lam.parts
    if a3 <= 1:
        raise ValueError(f"{lam} is already of the form [a,b,1^c]")
    lam1 = IntPartition([a1 + 1, a2, a3 - 1] + rest)
    lam2 = IntPartition([a1, a2 + a3 - 1, 1] + rest)
    lam3 = IntPartition([a1 + a2, 1, a3 - 1] + rest)
    return lam1, lam2, lam3


@dataclass
class RewriteCertificate:
    """Sequence of (lambda, multiplier) moves; each replaces m[lambda] by m([l1] + [l2] - [l3])."""

    moves: list[tuple[IntPartition, Fraction]] = field(default_factory=list)

    def replay(self, start: Mapping[IntPartition, Fraction], final: Mapping[IntPartition, Fraction],
               check_classes: bool = True) -> bool:
        cur = dict(start)
        for lam, m in self.moves:
            l1, l2, l3 = square_move(lam)
            if check_classes:
                lhs = class_unordered(lam)
                rhs = class_unordered(l1) + class_unordered(l2) - class_unordered(l3)
                if lhs != rhs:
                    return False
            for mu, s in ((lam, -1), (l1, 1), (l2, 1), (l3, -1)):
                cur[mu] = cur.get(mu, 0) + s * m
        cur = {k: v for k, v in cur.items() if v}
        fin = {k: v for k, v in final.items() if v}
        return cur == fin

    def to_json(self):
        out = []
        for lam, m in self.moves:
            l1, l2, l3 = square_move(lam)
            out.append({"partition": lam.to_json(), "multiplier": str(m),
                        "plus": [l1.to_json(), l2.to_json()], "minus": l3.to_json()})
        return out


def rewrite_to_ab1(coeffs: Mapping[IntPartition, Fraction]) -> tuple[dict[IntPartition, Fraction], RewriteCertificate]:
    """Apply square moves until every partition has at most two parts > 1."""
    cur = {k: Fraction(v) for k, v in coeffs.items() if v}
    cert = RewriteCertificate()
    while True:
        bad = [lam for lam, c in cur.items() if c and not is_ab1(lam)]
        if not bad:
            break
        # each move raises a1 + a2, so working from the smallest a1 + a2 terminates
        lam = min(bad, key=lambda l: (l.parts[0] + l.parts[1], l.parts))
        m = cur.pop(lam)
        cert.moves.append((lam, m))
        for mu, s in zip(square_move(lam), (1, 1, -1)):
            cur[mu] = cur.get(mu, 0) + s * m
            if not cur[mu]:
                del cur[mu]
    return cur, cert


@dataclass
class RelationVerdict:
    holds: bool
    by_polynomial: bool
    by_evaluation: bool
    by_certificate: bool | None = None
    certificate: RewriteCertificate | None = None
    residual: dict = field(default_factory=dict)
    nonequivariant_zero: bool | None = None

    def __bool__(self):
        return self.holds


def relation_check(S: StrataCombinationUnordered, certificate: bool = True) -> RelationVerdict:
    by_poly = not S.z_polynomials()
    value = S.evaluate()
    by_eval = not value
    noneq = not value.specialize(0, 0)
    verdict = RelationVerdict(holds=by_poly and by_eval, by_polynomial=by_poly, by_evaluation=by_eval,
                              nonequivariant_zero=noneq)
    if certificate:
        start = S.normalized()
        final, cert = rewrite_to_ab1(start)
        replays = cert.replay(start, final)
        verdict.certificate = cert
        verdict.residual = final
        verdict.by_certificate = replays and not final
        verdict.holds = verdict.holds and verdict.by_certificate
        if replays and len({by_poly, by_eval, not final}) != 1:
            raise IdentityFailure("relation criteria disagree")
    elif by_poly != by_eval:
        raise IdentityFailure("relation criteria disagree")
    return verdict


# ---------------------------------------------------------------------------
# Affine parts

def affine_class(beta: ProjClass) -> Poly:
    return beta.affine_part()


HUV = PolyRing(("H", "u", "v"))


def reconstruct(p0: Poly, n: int, weight: int | None = None) -> ProjClass:
    """Recover the projective class from its H^0 part by u -> u + H/w, v -> v + H/w."""
    w = n if weight is None else weight
    H = HUV.gen("H")
    shift = H * Fraction(1, w)
    p = p0.substitute({"u": HUV.gen("u") + shift, "v": HUV.gen("v") + shift}, HUV)
    out = ProjClass.from_poly(p, n)
    if not out.is_integral():
        raise DenominatorResidue(f"reconstruction of {p0} with weight {w} is not integral")
    return out


# ---------------------------------------------------------------------------
# Multiplicative identities on affine parts

def _aff(parts: Sequence[int]) -> Poly:
    return class_unordered(IntPartition(parts)).affine_part()


@dataclass
class IdentityCheck:
    lhs: Poly
    rhs: Poly
    terms: list

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def multiplicative_uplusv(a: int, b: int, c: int, check: bool = True) -> IdentityCheck:
    """n(u+v)[a,b,1^c]_0 as a combination of affine strata classes with one part fewer."""
    if c < 1 or a < 1 or b < 1:
        raise ValueError("needs a, b, c >= 1")
    n = a + b + c
    lhs = E1 * n * _aff([a, b] + [1] * c)
    ones = [1] * (c - 1)
    terms = [(c + a - b, [a + 1, b] + ones), (b + c - a, [a, b + 1] + ones), (a + b - c, [a + b, 1] + ones)]
    rhs = UV.zero
    for k, parts in terms:
        rhs = rhs + _aff(parts) * k
    res = IdentityCheck(lhs, rhs, [(k, IntPartition(p)) for k, p in terms])
    if check and not res.holds:
        raise IdentityFailure(f"(u+v) identity fails for a={a}, b={b}, c={c}")
    return res


def multiplicative_uv(a: int, b: int, c: int, check: bool = True) -> IdentityCheck:
    """n^2 uv [a,b,1^c]_0 as a combination of affine strata classes with two parts fewer."""
    if c < 2 or a < 1 or b < 1:
        raise ValueError("needs a, b >= 1 and c >= 2")
    n = a + b + c
    lhs = E2 * (n * n) * _aff([a, b] + [1] * c)
    ones = [1] * (c - 2)
    terms = [
        (2 * a * b + a * c + b * c + c * (c - 1), [a + 1, b + 1] + ones),
        (-a * b - b * c, [a + 2, b] + ones),
        (-a * b - a * c, [a, b + 2] + ones),
        (-a * c - b * c - c * (c - 1), [a + b + 1, 1] + ones),
        (a * c + b * c, [a + b, 2] + ones),
    ]
    rhs = UV.zero
    for k, parts in terms:
        rhs = rhs + _aff(parts) * k
    res = IdentityCheck(lhs, rhs, [(k, IntPartition(p)) for k, p in terms])
    if check and not res.holds:
        raise IdentityFailure(f"uv identity fails for a={a}, b={b}, c={c}")
    return res
