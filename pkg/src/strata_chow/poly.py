"""Sparse exact polynomials over Z, Q and F_2.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
coefficients, tied to a :class:`PolyRing` that fixes the variable names,
their grading weights and (optionally) a prime modulus.  Coefficients are
Python ints, or :class:`fractions.Fraction` once a rational scalar has been
introduced explicitly; integer-only code paths never convert silently.
"""

from __future__ import annotations

import ast
import heapq
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


class NotDivisible(ArithmeticError):
    """Raised when an exact division has a nonzero remainder."""


class PolyRing:
    __slots__ = ("vars", "weights", "modulus")
    _cache: dict = {}

    def __new__(cls, vars: Sequence[str], weights: Sequence[int] | None = None, modulus: int | None = None):
        vars = tuple(vars)
        weights = tuple(weights) if weights is not None else (1,) * len(vars)
        key = (vars, weights, modulus)
        ring = cls._cache.get(key)
        if ring is None:
            ring = object.__new__(cls)
            ring.vars, ring.weights, ring.modulus = vars, weights, modulus
            cls._cache[key] = ring
        return ring

    def __repr__(self):
        mod = f", mod {self.modulus}" if self.modulus else ""
        return f"PolyRing({', '.join(self.vars)}{mod})"

    def __reduce__(self):
        return (PolyRing, (self.vars, self.weights, self.modulus))

    @property
    def zero(self) -> "Poly":
        return Poly({}, self)

    @property
    def one(self) -> "Poly":
        return Poly({(0,) * len(self.vars): 1}, self)

    def gen(self, name: str) -> "Poly":
        idx = self.vars.index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(self.vars)))
        return Poly({exps: 1}, self)

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.gen(v) for v in self.vars)

    def const(self, c) -> "Poly":
        return Poly({(0,) * len(self.vars): c}, self)


UV = PolyRing(("u", "v"))
C23 = PolyRing(("c2", "c3"), weights=(2, 3), modulus=2)


def _clean(terms, modulus):
    out = {}
    if modulus:
        for e, c in terms.items():
            c %= modulus
            if c:
                out[e] = c
    else:
        for e, c in terms.items():
            if c:
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                out[e] = c
    return out


class Poly:
    """Immutable sparse polynomial in the variables of ``ring``."""

    __slots__ = ("terms", "ring", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, ring: PolyRing = UV):
        self.ring = ring
        self.terms = _clean(dict(terms or {}), ring.modulus)
        self._hash = None

    @classmethod
    def _raw(cls, terms, ring):
        p = object.__new__(cls)
        p.ring, p.terms, p._hash = ring, terms, None
        return p

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.vars, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        mod = self.ring.modulus
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if mod:
                s %= mod
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly._raw(terms, self.ring) if not mod else Poly(terms, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            return Poly({e: c * other for e, c in self.terms.items()}, self.ring)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict = {}
        for e1, c1 in b.items():
            for e2, c2 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure --------------------------------------------------------
    def degree(self) -> int:
        """Weighted total degree; -1 for the zero polynomial."""
        w = self.ring.weights
        return max((sum(a * b for a, b in zip(e, w)) for e in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        w = self.ring.weights
        degs = {sum(a * b for a, b in zip(e, w)) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.ring.vars), 0)

    def coefficients(self) -> list:
        return list(self.terms.values())

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def map_coefficients(self, f, ring: PolyRing | None = None) -> "Poly":
        return Poly({e: f(c) for e, c in self.terms.items()}, ring or self.ring)

    def reduce_mod(self, modulus: int, ring: PolyRing) -> "Poly":
        """Reduce an integral polynomial into a ring of characteristic ``modulus``."""
        if ring.vars != self.ring.vars or ring.modulus != modulus:
            raise ValueError("target ring must share variables and carry the modulus")
        if not self.is_integral():
            raise ValueError("only integral polynomials reduce modulo a prime")
        return Poly(self.terms, ring)

    # -- division and substitution ---------------------------------------
    def exact_div(self, q) -> "Poly":
        """Return ``r`` with ``self == q * r``; raise :class:`NotDivisible` otherwise."""
        q = self._coerce(q)
        if not q:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(q.terms)
        lead_c = q.terms[lead]
        mod = self.ring.modulus
        rem = dict(self.terms)
        heap = [tuple(-a for a in e) for e in rem]
        heapq.heapify(heap)
        quot = {}
        while heap:
            e = tuple(-a for a in heapq.heappop(heap))
            c = rem.get(e)
            if not c:
                continue
            shift = tuple(a - b for a, b in zip(e, lead))
            if min(shift) < 0:
                raise NotDivisible(f"{self} is not divisible by {q}")
            if mod:
                f = (c * pow(lead_c, -1, mod)) % mod
            elif isinstance(c, int) and isinstance(lead_c, int):
                if c % lead_c:
                    raise NotDivisible(f"{self} is not divisible by {q}")
                f = c // lead_c
            else:
                f = Fraction(c) / lead_c
            quot[shift] = f
            for eq, cq in q.terms.items():
                m = tuple(a + b for a, b in zip(shift, eq))
                new = rem.get(m, 0) - f * cq
                if mod:
                    new %= mod
                if new:
                    if m not in rem:
                        heapq.heappush(heap, tuple(-a for a in m))
                    rem[m] = new
                else:
                    rem.pop(m, None)
        return Poly(quot, self.ring)

    def substitute(self, bindings: Mapping[str, object], ring: PolyRing | None = None) -> "Poly":
        """Simultaneously substitute variables.

        Unbound variables are carried over by name into ``ring`` (default: own ring).
        """
        ring = ring or self.ring
        images = []
        for v in self.ring.vars:
            if v in bindings:
                b = bindings[v]
                images.append(b if isinstance(b, Poly) else ring.const(b))
            elif v in ring.vars:
                images.append(ring.gen(v))
            else:
                raise KeyError(f"no binding for variable {v!r} in target {ring}")
        powers: list[dict] = [{0: ring.one} for _ in images]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * images[i]
            return cache[k]

        out = ring.zero
        for e, c in self.terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def swap(self, a: str, b: str) -> "Poly":
        ia, ib = self.ring.vars.index(a), self.ring.vars.index(b)
        out = {}
        for e, c in self.terms.items():
            e = list(e)
            e[ia], e[ib] = e[ib], e[ia]
            out[tuple(e)] = c
        return Poly(out, self.ring)

    def evaluate(self, values: Mapping[str, object]):
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(self.ring.vars, e):
                if k:
                    t = t * values[v] ** k
            total += t
        return total

    # -- rendering ---------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, object]]:
        w = self.ring.weights
        return sorted(self.terms.items(),
                      key=lambda it: (-sum(a * b for a, b in zip(it[0], w)), tuple(-a for a in it[0])))

    def __str__(self):
        return format_terms(self.sorted_terms(), self.ring.vars)

    def __repr__(self):
        return f"Poly({self})"

    def to_json(self) -> dict:
        d = {"vars": list(self.ring.vars),
             "terms": [{"exps": list(e), "coeff": str(c)} for e, c in self.sorted_terms()]}
        if self.ring.modulus:
            d["modulus"] = self.ring.modulus
        if any(w != 1 for w in self.ring.weights):
            d["weights"] = list(self.ring.weights)
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        ring = PolyRing(data["vars"], data.get("weights"), data.get("modulus"))
        return cls({tuple(t["exps"]): parse_coeff(t["coeff"]) for t in data["terms"]}, ring)


def parse_poly(text: str, ring: "PolyRing") -> Poly:
    """Parse an arithmetic expression in the ring's variables ("^" and "**" both mean power)."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return ring.const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in ring.vars:
                raise ValueError(f"unknown variable {node.id!r}")
            return ring.gen(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            a = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise ValueError("exponents must be non-negative integer literals")
                return a ** node.right.value
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b.is_constant() or not b:
                    raise ValueError("can only divide by a nonzero constant")
                return a * (Fraction(1) / Fraction(b.constant_term()))
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree.body)


def parse_coeff(s: str):
    f = Fraction(s)
    return f.numerator if f.denominator == 1 else f


def _monomial(exps, names):
    parts = []
    for name, k in zip(names, exps):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_terms(items: Iterable[tuple[tuple, object]], names: Sequence[str]) -> str:
    out = []
    for exps, c in items:
        mono = _monomial(exps, names)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) or "0"


# ---------------------------------------------------------------------------
# Convenience constructors in Z[u, v] and F_2[c2, c3]

def UVPoly(terms: Mapping[tuple[int, int], object] | None = None) -> Poly:
    """Polynomial in u, v with arbitrary-precision coefficients."""
    return Poly(terms, UV)


def Mod2Poly(terms: Mapping[tuple[int, int], object] | None = None) -> Poly:
    """Polynomial in c2, c3 over F_2 (deg c2 = 2, deg c3 = 3)."""
    return Poly(terms, C23)


U, V = UV.gen("u"), UV.gen("v")
E1 = U + V
E2 = U * V
U_MINUS_V = U - V


@lru_cache(maxsize=None)
def u_minus_v_power(k: int) -> Poly:
    return U_MINUS_V ** k


@lru_cache(maxsize=None)
def complete_homogeneous(k: int) -> Poly:
    """h_k(u, v) = sum of all degree-k monomials."""
    return UVPoly({(a, k - a): 1 for a in range(k + 1)})


def symmetric_to_elementary(p: Poly) -> dict[tuple[int, int], object]:
    """Write a symmetric p(u, v) as sum c * e1^a * e2^b; returns {(a, b): c}."""
    if p.ring is not UV:
        raise ValueError("expected a polynomial in u, v")
    out: dict[tuple[int, int], object] = {}
    rest = p
    while rest:
        (i, j) = max(rest.terms)
        c = rest.terms[(i, j)]
        if i < j:
            raise ValueError(f"{p} is not symmetric in u, v")
        out[(i - j, j)] = c
        rest = rest - (E1 ** (i - j)) * (E2 ** j) * c
    return out


# ---------------------------------------------------------------------------
# Univariate helpers: coefficient lists (lowest degree first) over any ring.

def _is_zero(c) -> bool:
    return not c


def trim(coeffs: list) -> list:
    coeffs = list(coeffs)
    while coeffs and _is_zero(coeffs[-1]):
        coeffs.pop()
    return coeffs


def upoly_mul(a: Sequence, b: Sequence, zero=0) -> list:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _is_zero(x):
            continue
        for j, y in enumerate(b):
            if not _is_zero(y):
                out[i + j] = out[i + j] + x * y
    return out


def upoly_add(a: Sequence, b: Sequence, zero=0) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]


def _check_monic(P: Sequence):
    if not P or P[-1] != 1:
        raise ValueError("modulus polynomial must be monic")


def upoly_divmod_monic(f: Sequence, P: Sequence, zero=0) -> tuple[list, list]:
    """Quotient and remainder of f by the monic P."""
    _check_monic(P)
    D = len(P) - 1
    f = list(f)
    if len(f) <= D:
        return [], f + [zero] * (D - len(f))
    q = [zero] * (len(f) - D)
    for i in range(len(f) - 1, D - 1, -1):
        c = f[i]
        if _is_zero(c):
            continue
        q[i - D] = c
        for j in range(D):
            if not _is_zero(P[j]):
                f[i - D + j] = f[i - D + j] - c * P[j]
        f[i] = zero
    return q, f[:D]


def reduce_monic(f: Sequence, P: Sequence, zero=0) -> list:
    return upoly_divmod_monic(f, P, zero)[1]


def upoly_exact_div(f: Sequence, g: Sequence, zero=0) -> list:
    """Exact division of univariate polynomials whose divisor is monic."""
    q, r = upoly_divmod_monic(trim(f), trim(g), zero)
    if any(not _is_zero(c) for c in r):
        raise NotDivisible("univariate division left a remainder")
    return q


def integrate(f: Sequence, P: Sequence, zero=0):
    """Top coefficient of f reduced modulo the monic P of degree n+1.

    This is the R-linear functional R[H]/(P) -> R picking out the H^n coefficient.
    """
    _check_monic(P)
    r = reduce_monic(f, P, zero)
    return r[len(P) - 2] if len(P) >= 2 else zero


def difference_quotient(P: Sequence, t, zero=0) -> list:
    """Coefficients in H of (P(H) - P(t)) / (H - t), with t any ring element."""
    D = len(P) - 1
    # sum_{k} P_k (H^k - t^k)/(H - t) = sum_k P_k sum_{i<k} H^i t^{k-1-i}
    out = [zero] * max(D, 0)
    tpow = [1]
    for _ in range(D):
        tpow.append(tpow[-1] * t)
    for k in range(1, D + 1):
        if _is_zero(P[k]):
            continue
        for i in range(k):
            out[i] = out[i] + P[k] * tpow[k - 1 - i]
    return out
