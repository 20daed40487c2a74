"""Independent oracles built on sympy and torus localization.

These never call the package's own pushforward code: fixed points, tangent
weights and the localization formula are written out directly.
"""

from __future__ import annotations

from itertools import product

import pytest
import sympy as sp

from strata_chow.poly import Poly
from strata_chow.rings import OrderedClass, ProjClass

u, v, H = sp.symbols("u v H")


def to_sympy(p: Poly):
    expr = sp.Integer(0)
    syms = [sp.Symbol(name) for name in p.ring.vars]
    for e, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else sp.Integer(c)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sp.expand(expr)


P1_POINTS = (-u, -v)


def p1_euler(h):
    # tangent weight of P^1 at the fixed point with H = h
    other = -v if h == -u else -u
    return h - other


def pn_points(n):
    return [-(j * u + (n - j) * v) for j in range(n + 1)]


def pn_euler(n, j):
    pts = pn_points(n)
    return sp.prod([pts[j] - pts[i] for i in range(n + 1) if i != j])


def localize_proj(beta: ProjClass):
    expr = to_sympy(beta.to_poly())
    return [sp.expand(expr.subs(H, h)) for h in pn_points(beta.n)]


def localize_ordered(alpha: OrderedClass):
    expr = to_sympy(alpha.to_poly())
    hs = sp.symbols(f"H1:{alpha.n + 1}")
    out = {}
    for sigma in product(P1_POINTS, repeat=alpha.n):
        out[sigma] = sp.expand(expr.subs(dict(zip(hs, sigma))))
    return out


def multiplication_pushforward_oracle(weights):
    """Localizations of Phi_*[ (P^1)^d ] at the fixed points of P^n."""
    n = sum(weights)
    pts = pn_points(n)
    out = [sp.Integer(0)] * (n + 1)
    for sigma in product(P1_POINTS, repeat=len(weights)):
        h = sum(a * s for a, s in zip(weights, sigma))
        j = next(i for i, p in enumerate(pts) if sp.expand(p - h) == 0)
        out[j] += pn_euler(n, j) / sp.prod([p1_euler(s) for s in sigma])
    return [sp.factor(x) for x in out]


def diagonal_oracle(P):
    """Localizations of the class of the diagonal Delta_P in (P^1)^n."""
    out = {}
    for sigma in product(P1_POINTS, repeat=P.n):
        val = sp.Integer(1)
        for part in P.parts:
            if any(sigma[i - 1] != sigma[part[0] - 1] for i in part):
                val = sp.Integer(0)
                break
            for i in part[1:]:
                val *= p1_euler(sigma[i - 1])
        out[sigma] = sp.expand(val)
    return out


@pytest.fixture(scope="session")
def oracles():
    return {"localize_proj": localize_proj, "localize_ordered": localize_ordered,
            "phi": multiplication_pushforward_oracle, "diagonal": diagonal_oracle,
            "to_sympy": to_sympy}
