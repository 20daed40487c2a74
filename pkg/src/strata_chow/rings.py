"""Quotient rings A_T((P^1)^n) and A_T(P^n) with coefficients in Z[u, v].

OrderedClass stores the canonical multilinear form: a map from bitmasks
S (bit i-1 set iff H_i occurs) to the u, v coefficient of prod_{i in S} H_i.
ProjClass stores the n+1 coefficients of a polynomial in H of degree <= n,
reduced modulo G(H) = prod_{k=0}^{n} (H + k u + (n-k) v).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .poly import (UV, E1, E2, U, V, NotDivisible, Poly, PolyRing, UVPoly,
                   format_terms, reduce_monic, upoly_mul)

SCHEMA = "strata-chow/1"


def _uv(c) -> Poly:
    if isinstance(c, Poly):
        if c.ring is not UV:
            raise ValueError("coefficients must lie in Z[u, v]")
        return c
    return UV.const(c)


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out, i = [], 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


@lru_cache(maxsize=None)
def _neg_e1_pow(k: int) -> Poly:
    return (-E1) ** k


@lru_cache(maxsize=None)
def _neg_e2_pow(k: int) -> Poly:
    return (-E2) ** k


def _coeff_str(c: Poly) -> str:
    s = str(c)
    return f"({s})" if len(c.terms) > 1 else s


def _render(items, names) -> str:
    """Render (monomial-name, Poly coefficient) pairs."""
    out = []
    for mono, c in items:
        if not mono:
            body = str(c)
            if len(c.terms) > 1:
                body = f"({body})"
            neg = False
            if len(c.terms) == 1:
                (coef,) = c.terms.values()
                if coef < 0:
                    neg, body = True, str(-c)
        elif len(c.terms) == 1:
            (e, coef), = c.terms.items()
            neg = coef < 0
            sc = -c if neg else c
            body = mono if sc == 1 else f"{sc}*{mono}"
        else:
            neg, body = False, f"({c})*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) or "0"


class OrderedClass:
    """Element of Z[u,v][H_1..H_n] / (F(H_i)) with F(z) = (z+u)(z+v)."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, object] | None = None):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.n = n
        full = (1 << n) - 1
        clean = {}
        for m, c in (coeffs or {}).items():
            if m & ~full:
                raise ValueError(f"subset mask {m} exceeds n={n}")
            c = _uv(c)
            if c:
                clean[m] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def one(cls, n: int) -> "OrderedClass":
        return cls(n, {0: UV.one})

    @classmethod
    def zero(cls, n: int) -> "OrderedClass":
        return cls(n)

    @classmethod
    def H(cls, i: int, n: int) -> "OrderedClass":
        if not 1 <= i <= n:
            raise ValueError(f"H_{i} does not exist for n={n}")
        return cls(n, {1 << (i - 1): UV.one})

    @classmethod
    def scalar(cls, c, n: int) -> "OrderedClass":
        return cls(n, {0: _uv(c)})

    @classmethod
    def from_subsets(cls, n: int, coeffs: Mapping[Iterable[int], object]) -> "OrderedClass":
        return cls(n, {mask_of(s): c for s, c in coeffs.items()})

    # -- access ---------------------------------------------------------------
    def coefficient(self, subset: Iterable[int] | int) -> Poly:
        m = subset if isinstance(subset, int) else mask_of(subset)
        return self.coeffs.get(m, UV.zero)

    def constant(self) -> Poly:
        return self.coefficient(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = OrderedClass.scalar(other, self.n)
        if not isinstance(other, OrderedClass):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def _check(self, other: "OrderedClass"):
        if self.n != other.n:
            raise ValueError(f"mismatched n: {self.n} vs {other.n}")

    # -- arithmetic -------------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, OrderedClass):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return OrderedClass.scalar(other, self.n)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return OrderedClass(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return OrderedClass(self.n, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            c = _uv(other) if not isinstance(other, Fraction) else other
            return OrderedClass(self.n, {m: x * c for m, x in self.coeffs.items()})
        if not isinstance(other, OrderedClass):
            return NotImplemented
        self._check(other)
        out: dict[int, Poly] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                c = c1 * c2
                common = m1 & m2
                base = m1 ^ m2
                if not common:
                    out[base] = out[base] + c if base in out else c
                    continue
                # prod_{i in C} H_i^2 = prod_{i in C} (-e1 H_i - e2)
                k = bin(common).count("1")
                for sub in _submasks(common):
                    j = bin(sub).count("1")
                    term = c * _neg_e1_pow(j) * _neg_e2_pow(k - j)
                    key = base | sub
                    out[key] = out[key] + term if key in out else term
        return OrderedClass(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = OrderedClass.one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def exact_div(self, q) -> "OrderedClass":
        """Divide every coefficient exactly by q in Z[u, v]."""
        q = _uv(q)
        return OrderedClass(self.n, {m: c.exact_div(q) for m, c in self.coeffs.items()})

    # -- structure -----------------------------------------------------------
    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = set()
        for m, c in self.coeffs.items():
            if not c.is_homogeneous():
                return False
            degs.add(c.degree() + bin(m).count("1"))
        if len(degs) > 1:
            return False
        return degree is None or not degs or degs == {degree}

    def degree(self) -> int:
        return max((c.degree() + bin(m).count("1") for m, c in self.coeffs.items()), default=-1)

    def swap_uv(self) -> "OrderedClass":
        return OrderedClass(self.n, {m: c.swap("u", "v") for m, c in self.coeffs.items()})

    def specialize(self, u=0, v=0) -> "OrderedClass":
        """Substitute numbers (or polynomials) for u and v."""
        return OrderedClass(self.n, {m: c.substitute({"u": u, "v": v}) for m, c in self.coeffs.items()})

    def substitute_H(self, values: Mapping[int, object]) -> "OrderedClass":
        """Substitute u, v polynomials for some H_i; the substituted variables disappear."""
        vals = {i: _uv(x) for i, x in values.items()}
        sub_mask = mask_of(vals)
        out: dict[int, Poly] = {}
        for m, c in self.coeffs.items():
            keep = m & ~sub_mask
            for i in indices_of(m & sub_mask):
                c = c * vals[i]
            out[keep] = out[keep] + c if keep in out else c
        return OrderedClass(self.n, out)

    def evaluate(self, values: Mapping[int, object]) -> Poly:
        """Substitute for all H_i and return the resulting u, v polynomial."""
        missing = set(range(1, self.n + 1)) - set(values)
        used = set().union(*(indices_of(m) for m in self.coeffs)) if self.coeffs else set()
        if missing & used:
            raise ValueError(f"no value for H_{min(missing & used)}")
        return self.substitute_H({i: values[i] for i in values}).constant()

    def pushforward(self, i: int) -> "OrderedClass":
        """Coefficient of H_i, as a class over the remaining n-1 variables renumbered in order."""
        if not 1 <= i <= self.n:
            raise ValueError(f"index {i} out of range for n={self.n}")
        bit = 1 << (i - 1)
        low = bit - 1
        out = {}
        for m, c in self.coeffs.items():
            if m & bit:
                rest = m & ~bit
                out[(rest & low) | ((rest >> 1) & ~low)] = c
        return OrderedClass(self.n - 1, out)

    def embed(self, n: int, positions: Sequence[int] | None = None) -> "OrderedClass":
        """View as a class on n >= self.n factors, variable j going to H_{positions[j-1]}."""
        positions = list(positions or range(1, self.n + 1))
        out = {}
        for m, c in self.coeffs.items():
            out[mask_of(positions[i - 1] for i in indices_of(m))] = c
        return OrderedClass(n, out)

    # -- rendering ------------------------------------------------------------
    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda it: (-bin(it[0]).count("1"), indices_of(it[0])))

    def __str__(self):
        items = [("*".join(f"H{i}" for i in indices_of(m)), c) for m, c in self.sorted_items()]
        return _render(items, None)

    def __repr__(self):
        return f"OrderedClass(n={self.n}, {self})"

    def to_poly(self) -> Poly:
        ring = PolyRing(tuple(f"H{i}" for i in range(1, self.n + 1)) + ("u", "v"))
        terms = {}
        for m, c in self.coeffs.items():
            hexp = tuple(1 if m >> i & 1 else 0 for i in range(self.n))
            for e, x in c.terms.items():
                terms[hexp + e] = x
        return Poly(terms, ring)

    def to_json(self) -> dict:
        d = {"schema": SCHEMA, "type": "OrderedClass", "n": self.n}
        d.update(self.to_poly().to_json())
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> "OrderedClass":
        n = int(data["n"])
        p = Poly.from_json(data)
        names = list(p.ring.vars)
        expected = [f"H{i}" for i in range(1, n + 1)] + ["u", "v"]
        if names != expected:
            raise ValueError(f"expected variables {expected}, got {names}")
        return cls.from_poly(p, n)

    @classmethod
    def from_poly(cls, p: Poly, n: int) -> "OrderedClass":
        """Reduce a polynomial in H1..Hn, u, v (any H-degrees) to canonical form."""
        names = p.ring.vars
        hidx = {}
        for k, name in enumerate(names):
            if name in ("u", "v"):
                continue
            if not (name.startswith("H") and name[1:].isdigit() and 1 <= int(name[1:]) <= n):
                raise ValueError(f"unknown variable {name!r}")
            hidx[k] = int(name[1:])
        iu, iv = names.index("u") if "u" in names else None, names.index("v") if "v" in names else None
        result = OrderedClass.zero(n)
        powers = {}

        def hpow(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = OrderedClass.one(n) if k == 0 else hpow(i, k - 1) * OrderedClass.H(i, n)
            return powers[(i, k)]

        for e, c in p.terms.items():
            coef = UVPoly({(e[iu] if iu is not None else 0, e[iv] if iv is not None else 0): c})
            term = OrderedClass.scalar(coef, n)
            for k, i in hidx.items():
                if e[k]:
                    term = term * hpow(i, e[k])
            result = result + term
        return result


# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def projective_relation(n: int) -> tuple[Poly, ...]:
    """Coefficients (low to high) of G(H) = prod_{k=0}^{n} (H + k u + (n-k) v)."""
    g = [UV.one]
    for k in range(n + 1):
        g = upoly_mul(g, [U * k + V * (n - k), UV.one], UV.zero)
    return tuple(g)


@lru_cache(maxsize=None)
def point_class(k: int, n: int) -> tuple[Poly, ...]:
    """Class of the k-th torus-fixed point of P^n: prod_{j != k} (H + j v + (n-j) u)."""
    if not 0 <= k <= n:
        raise ValueError("fixed point index out of range")
    g = [UV.one]
    for j in range(n + 1):
        if j != k:
            g = upoly_mul(g, [V * j + U * (n - j), UV.one], UV.zero)
    return tuple(g)


class ProjClass:
    """Element of Z[u,v][H] / (G(H)), stored as n+1 coefficients of H^0..H^n."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[object] | None = None):
        self.n = n
        coeffs = [_uv(c) for c in (coeffs or [])]
        if len(coeffs) > n + 1:
            coeffs = reduce_monic(coeffs, projective_relation(n), UV.zero)
        coeffs += [UV.zero] * (n + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)

    @classmethod
    def one(cls, n: int) -> "ProjClass":
        return cls(n, [UV.one])

    @classmethod
    def zero(cls, n: int) -> "ProjClass":
        return cls(n)

    @classmethod
    def H(cls, n: int, power: int = 1) -> "ProjClass":
        return cls(n, [UV.zero] * power + [UV.one])

    @classmethod
    def scalar(cls, c, n: int) -> "ProjClass":
        return cls(n, [_uv(c)])

    @classmethod
    def point(cls, k: int, n: int) -> "ProjClass":
        return cls(n, point_class(k, n))

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = ProjClass.scalar(other, self.n)
        if not isinstance(other, ProjClass):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def _lift(self, other):
        if isinstance(other, ProjClass):
            if other.n != self.n:
                raise ValueError(f"mismatched n: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Poly)):
            return ProjClass.scalar(other, self.n)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return ProjClass(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return ProjClass(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return ProjClass(self.n, [a * other for a in self.coeffs])
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return ProjClass(self.n, upoly_mul(list(self.coeffs), list(other.coeffs), UV.zero))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = ProjClass.one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def exact_div(self, q) -> "ProjClass":
        q = _uv(q)
        return ProjClass(self.n, [c.exact_div(q) for c in self.coeffs])

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = set()
        for i, c in enumerate(self.coeffs):
            if c:
                if not c.is_homogeneous():
                    return False
                degs.add(c.degree() + i)
        if len(degs) > 1:
            return False
        return degree is None or not degs or degs == {degree}

    def degree(self) -> int:
        return max((c.degree() + i for i, c in enumerate(self.coeffs) if c), default=-1)

    def affine_part(self) -> Poly:
        return self.coeffs[0]

    def swap_uv(self) -> "ProjClass":
        return ProjClass(self.n, [c.swap("u", "v") for c in self.coeffs])

    def specialize(self, u=0, v=0) -> "ProjClass":
        """Substitute numbers for u, v (the relation G is not re-imposed)."""
        out = ProjClass.__new__(ProjClass)
        out.n = self.n
        out.coeffs = tuple(c.substitute({"u": u, "v": v}) for c in self.coeffs)
        return out

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coeffs)

    def __str__(self):
        items = []
        for i in range(self.n, -1, -1):
            c = self.coeffs[i]
            if c:
                items.append(("" if i == 0 else ("H" if i == 1 else f"H^{i}"), c))
        return _render(items, None)

    def __repr__(self):
        return f"ProjClass(n={self.n}, {self})"

    def to_poly(self) -> Poly:
        ring = PolyRing(("H", "u", "v"))
        terms = {}
        for i, c in enumerate(self.coeffs):
            for e, x in c.terms.items():
                terms[(i,) + e] = x
        return Poly(terms, ring)

    def to_json(self) -> dict:
        d = {"schema": SCHEMA, "type": "ProjClass", "n": self.n}
        d.update(self.to_poly().to_json())
        return d

    @classmethod
    def from_poly(cls, p: Poly, n: int) -> "ProjClass":
        names = p.ring.vars
        if set(names) - {"H", "u", "v"}:
            raise ValueError(f"unexpected variables in {names}")
        ih = names.index("H") if "H" in names else None
        iu = names.index("u") if "u" in names else None
        iv = names.index("v") if "v" in names else None
        coeffs: list[dict] = []
        for e, c in p.terms.items():
            h = e[ih] if ih is not None else 0
            while len(coeffs) <= h:
                coeffs.append({})
            key = (e[iu] if iu is not None else 0, e[iv] if iv is not None else 0)
            coeffs[h][key] = c
        return cls(n, [UVPoly(t) for t in coeffs])

    @classmethod
    def from_json(cls, data: Mapping) -> "ProjClass":
        return cls.from_poly(Poly.from_json(data), int(data["n"]))
