"""PGL_2 refinements: the polynomials p_n, q_n and mod-2 classes of Z_lambda."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .partitions import IntPartition
from .poly import C23, Poly, PolyRing, reduce_monic, upoly_exact_div, upoly_mul
from .rings import SCHEMA, ProjClass, _render
from .unordered import class_Z

# deg c2 = 2, deg c3 = 3, deg t = 1
PT_Z = PolyRing(("c2", "c3", "t"), weights=(2, 3, 1))
PT_2 = PolyRing(("c2", "c3", "t"), weights=(2, 3, 1), modulus=2)
HUV_2 = PolyRing(("H", "u", "v"), modulus=2)


def _require_even(n: int):
    if n % 2 or n <= 0:
        raise ValueError(f"n must be a positive even integer, got {n}")


@lru_cache(maxsize=None)
def p_poly(n: int) -> Poly:
    """The integral polynomial p_n(t) over Z[c2, c3]."""
    _require_even(n)
    c2, c3, t = PT_Z.gens()
    first = t
    for k in range(1, n // 2 + 1):
        first = first * (t ** 2 + c2 * (k * k))
    if n % 4 == 0:
        m, lead = n // 4, t ** (n // 4 + 1)
    else:
        m, lead = (n + 2) // 4, t ** ((n - 2) // 4)
    cubic = t ** 3 + c2 * t
    second = PT_Z.zero
    for k in range(1, m + 1):
        second = second + (cubic ** (m - k)) * (c3 ** k) * comb(m, k)
    return first + lead * second


@lru_cache(maxsize=None)
def q_poly(n: int) -> Poly:
    """q_n = p_n mod 2 in F_2[c2, c3][t]."""
    return Poly(p_poly(n).terms, PT_2)


def q_closed_form(n: int) -> Poly:
    _require_even(n)
    c2, c3, t = PT_2.gens()
    cubic = t ** 3 + c2 * t + c3
    if n % 4 == 0:
        return t ** ((n + 4) // 4) * cubic ** (n // 4)
    return t ** ((n - 2) // 4) * cubic ** ((n + 2) // 4)


def to_univariate(p: Poly, var: str = "t") -> list[Poly]:
    """Coefficient list in ``var`` (lowest first) over the ring of the other two variables."""
    names = p.ring.vars
    k = names.index(var)
    rest = tuple(x for x in names if x != var)
    ring = C23 if p.ring.modulus == 2 and rest == ("c2", "c3") else PolyRing(
        rest, tuple(w for x, w in zip(names, p.ring.weights) if x != var), p.ring.modulus)
    out: list[dict] = []
    for e, c in p.terms.items():
        while len(out) <= e[k]:
            out.append({})
        out[e[k]][e[:k] + e[k + 1:]] = c
    return [Poly(t, ring) for t in out]


@lru_cache(maxsize=None)
def q_coeffs(n: int) -> tuple[Poly, ...]:
    return tuple(to_univariate(q_poly(n)))


# ---------------------------------------------------------------------------

class Mod2Class:
    """Element of F_2[c2, c3][H] / (q_n(H)), n even."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[Poly] | None = None):
        _require_even(n)
        self.n = n
        cs = [c if isinstance(c, Poly) else C23.const(c) for c in (coeffs or [])]
        for c in cs:
            if c.ring is not C23:
                raise ValueError("coefficients must lie in F_2[c2, c3]")
        if len(cs) > n + 1:
            cs = reduce_monic(cs, q_coeffs(n), C23.zero)
        cs += [C23.zero] * (n + 1 - len(cs))
        self.coeffs = tuple(cs)

    @classmethod
    def one(cls, n: int) -> "Mod2Class":
        return cls(n, [C23.one])

    @classmethod
    def H(cls, n: int, power: int = 1) -> "Mod2Class":
        return cls(n, [C23.zero] * power + [C23.one])

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Mod2Class):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def _check(self, other):
        if not isinstance(other, Mod2Class) or other.n != self.n:
            raise ValueError("mismatched Mod2Class operands")

    def __add__(self, other):
        self._check(other)
        return Mod2Class(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __sub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Poly)):
            return Mod2Class(self.n, [a * other for a in self.coeffs])
        self._check(other)
        return Mod2Class(self.n, upoly_mul(list(self.coeffs), list(other.coeffs), C23.zero))

    __rmul__ = __mul__

    def c3_part(self) -> "Mod2Class":
        """Terms divisible by c3."""
        return Mod2Class(self.n, [Poly({e: c for e, c in p.terms.items() if e[1] > 0}, C23)
                                  for p in self.coeffs])

    def c3_free_part(self) -> "Mod2Class":
        return Mod2Class(self.n, [Poly({e: c for e, c in p.terms.items() if e[1] == 0}, C23)
                                  for p in self.coeffs])

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = set()
        for i, c in enumerate(self.coeffs):
            if c:
                if not c.is_homogeneous():
                    return False
                degs.add(c.degree() + i)
        return len(degs) <= 1 and (degree is None or not degs or degs == {degree})

    def to_poly(self) -> Poly:
        ring = PolyRing(("H", "c2", "c3"), weights=(1, 2, 3), modulus=2)
        terms = {}
        for i, c in enumerate(self.coeffs):
            for e, x in c.terms.items():
                terms[(i,) + e] = x
        return Poly(terms, ring)

    def __str__(self):
        items = []
        for i in range(self.n, -1, -1):
            c = self.coeffs[i]
            if c:
                items.append(("" if i == 0 else ("H" if i == 1 else f"H^{i}"), c))
        return _render(items, None)

    def __repr__(self):
        return f"Mod2Class(n={self.n}, {self})"

    def to_json(self) -> dict:
        d = {"schema": SCHEMA, "type": "Mod2Class", "n": self.n}
        d.update(self.to_poly().to_json())
        return d

    @classmethod
    def from_json(cls, data) -> "Mod2Class":
        p = Poly.from_json(data)
        if list(p.ring.vars) != ["H", "c2", "c3"]:
            raise ValueError("expected variables H, c2, c3")
        n = int(data["n"])
        coeffs: list[dict] = []
        for e, c in p.terms.items():
            while len(coeffs) <= e[0]:
                coeffs.append({})
            coeffs[e[0]][e[1:]] = c
        return cls(n, [Poly(t, C23) for t in coeffs])


def pgl2_mod2_class(lam: IntPartition) -> Mod2Class:
    """[Z_lambda] mod 2: zero unless lambda is special, then (q_n / q_d)(H)."""
    n = lam.n
    _require_even(n)
    if not lam.is_special():
        return Mod2Class(n)
    quotient = upoly_exact_div(list(q_coeffs(n)), list(q_coeffs(lam.d)), C23.zero)
    return Mod2Class(n, quotient)


@dataclass(frozen=True)
class PGL2IntegralClass:
    """[Z_lambda] in A_PGL2(P^n): the GL_2 image plus (n even) the c3-torsion part."""

    n: int
    free_part: ProjClass
    torsion_part: Mod2Class | None
    consistent: bool = True

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "type": "PGL2IntegralClass", "n": self.n,
                "free_part": self.free_part.to_json(),
                "torsion_part": self.torsion_part.to_json() if self.torsion_part is not None else None,
                "consistent": self.consistent}


def gl2_image_mod2(m: Mod2Class) -> Poly:
    """Image of the c3-free part under c2 -> -(u-v)^2, H -> H + (n/2)(u+v), reduced mod 2."""
    H, u, v = HUV_2.gens()
    shift = H + (u + v) * (m.n // 2)
    c2_image = (u - v) ** 2
    out = HUV_2.zero
    power = HUV_2.one
    for c in m.coeffs:
        for (a, b), x in c.terms.items():
            if b == 0:
                out = out + power * c2_image ** a
        power = power * shift
    return out


def projclass_mod2(beta: ProjClass) -> Poly:
    return Poly(beta.to_poly().terms, HUV_2)


def pgl2_integral_class(lam: IntPartition) -> PGL2IntegralClass:
    n = lam.n
    free = class_Z(lam)
    if n % 2:
        return PGL2IntegralClass(n, free, None, True)
    m = pgl2_mod2_class(lam)
    consistent = gl2_image_mod2(m) == projclass_mod2(free)
    return PGL2IntegralClass(n, free, m.c3_part(), consistent)


# ---------------------------------------------------------------------------

def pgl2_presentation_check(n: int) -> bool:
    """The GL_2 image of the PGL_2 relation vanishes modulo G(H)."""
    ring = PolyRing(("H", "u", "v"))
    H, u, v = ring.gens()
    if n % 2:
        rel = ring.one
        for i in range(n + 1):
            rel = rel * (u * ((n + 1) // 2 - i) + v * ((1 - n) // 2 + i))
        image = rel.substitute({"u": H + u * ((n + 1) // 2) + v * ((n - 1) // 2),
                                "v": H + u * ((n - 1) // 2) + v * ((n + 1) // 2)}, ring)
    else:
        image = p_poly(n).substitute({"c2": -(u - v) ** 2, "c3": 0, "t": H + (u + v) * (n // 2)}, ring)
    return not ProjClass.from_poly(image, n)


# ---------------------------------------------------------------------------
# Independent route for lambda with all multiplicities even: push forward from
# prod P^{e_i} using the integration functional of each factor.

def _integration_table(e: int, top: int) -> list[Poly]:
    """iota(H^p) for p <= top: top coefficient of H^p modulo q_e."""
    qe = list(q_coeffs(e))
    out = []
    cur = [C23.one]
    for p in range(top + 1):
        r = reduce_monic(cur, qe, C23.zero)
        out.append(r[e] if len(r) > e else C23.zero)
        cur = [C23.zero] + r
    return out


def mod2_class_by_integration(lam: IntPartition) -> Mod2Class:
    """(q_n(t) - q_n(X)) / (t - X) integrated over prod P^{e_i}, X = sum a_i H_i."""
    n = lam.n
    _require_even(n)
    mult = lam.multiplicities()
    if any(e % 2 for e in mult.values()):
        raise ValueError("all multiplicities must be even")
    parts = list(mult.items())
    tables = [_integration_table(e, n) for _, e in parts]
    qn = q_coeffs(n)

    @lru_cache(maxsize=None)
    def integral_power(m: int) -> Poly:
        # int X^m = sum over compositions p of m of multinomial * prod a_i^p_i iota_i(p_i)
        total = C23.zero

        def rec(i, rem, acc):
            nonlocal total
            if i == len(parts) - 1:
                a, _ = parts[i]
                if a % 2 or rem == 0:
                    total = total + acc * tables[i][rem]
                return
            a, _ = parts[i]
            for p in range(rem + 1):
                if comb(rem, p) * a ** p % 2 and tables[i][p]:
                    rec(i + 1, rem - p, acc * tables[i][p])

        rec(0, m, C23.one)
        return total

    out = [C23.zero] * (n + 1)
    for j in range(1, n + 2):
        if not qn[j]:
            continue
        for i in range(j):
            out[i] = out[i] + qn[j] * integral_power(j - 1 - i)
    return Mod2Class(n, out)


def pgl2_relation_zero(terms: dict[IntPartition, int]) -> bool:
    """Is sum a_lambda [Z_lambda] zero in A_PGL2(P^n)?  Integer coefficients.

    For n even both the GL_2 image and the c3-torsion part must vanish.
    """
    if not terms:
        return True
    n = next(iter(terms)).n
    free = ProjClass.zero(n)
    for lam, a in terms.items():
        if int(a) != a:
            raise ValueError("integer coefficients required")
        free = free + class_Z(lam) * int(a)
    if free:
        return False
    if n % 2:
        return True
    tors = Mod2Class(n)
    for lam, a in terms.items():
        if int(a) % 2:
            tors = tors + pgl2_mod2_class(lam).c3_part()
    return not tors
