"""Graded pieces of pushforward ideals in A_GL2(P^n) tensor Q.

Vectors are written in the coordinates e1^a e2^b H^c (c <= n), with
e1 = u + v and e2 = uv; multiplying by e1^a e2^b is then a shift of keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .linalg import RowSpace
from .partitions import IntPartition
from .poly import UV, Poly, symmetric_to_elementary
from .rings import OrderedClass, ProjClass, mask_of
from .unordered import class_Z, phi_pushforward


def gl2_coordinates(beta: ProjClass) -> dict[tuple[int, int, int], object]:
    out = {}
    for c, p in enumerate(beta.coeffs):
        for (a, b), x in symmetric_to_elementary(p).items():
            out[(a, b, c)] = x
    return out


def affine_coordinates(p: Poly) -> dict[tuple[int, int], object]:
    return symmetric_to_elementary(p)


def _shift(vec: dict, a: int, b: int) -> dict:
    return {(k[0] + a, k[1] + b) + k[2:]: x for k, x in vec.items()}


def _e_monomials(deg: int):
    for b in range(deg // 2 + 1):
        yield deg - 2 * b, b


def ambient_dimension(n: int, k: int) -> int:
    return sum((k - c) // 2 + 1 for c in range(min(n, k) + 1))


@dataclass
class GradedSubspace:
    n: int
    degree: int
    basis: list = field(default_factory=list)
    rank: int = 0
    space: RowSpace = field(default_factory=RowSpace, repr=False)

    def add(self, element, coords: dict) -> bool:
        if self.space.add(coords):
            self.basis.append(element)
            self.rank += 1
            return True
        return False

    def contains(self, coords: dict) -> bool:
        return self.space.contains(coords)


def _h_powers(g: ProjClass, top: int) -> list[ProjClass]:
    out, cur = [], g
    H = ProjClass.H(g.n)
    for _ in range(top + 1):
        out.append(cur)
        cur = cur * H
    return out


def _ideal_vectors(generators: Sequence[ProjClass], k: int, n: int):
    for g in generators:
        if g.n != n:
            raise ValueError("generators live over different n")
        if not g:
            continue
        if not g.is_homogeneous():
            raise ValueError(f"generator {g} is not homogeneous")
        dg = g.degree()
        if dg > k:
            continue
        for c, gh in enumerate(_h_powers(g, k - dg)):
            if not gh:
                continue
            coords = gl2_coordinates(gh)
            for a, b in _e_monomials(k - dg - c):
                yield (a, b, c, g), _shift(coords, a, b)


def ideal_degree_piece(generators: Sequence[ProjClass], k: int, n: int | None = None) -> GradedSubspace:
    """Degree-k piece of the ideal generated by homogeneous ProjClass generators."""
    if n is None:
        if not generators:
            raise ValueError("n is needed when there are no generators")
        n = generators[0].n
    piece = GradedSubspace(n, k)
    for label, vec in _ideal_vectors(generators, k, n):
        piece.add(label, vec)
    return piece


@lru_cache(maxsize=None)
def _source_pushforwards(weights: tuple[int, ...]) -> dict[int, ProjClass]:
    d = len(weights)
    out = {}
    for size in range(d + 1):
        for S in combinations(range(1, d + 1), size):
            alpha = OrderedClass(d, {mask_of(S): UV.one})
            out[mask_of(S)] = phi_pushforward(alpha, weights)
    return out


def _pushforward_vectors(lam: IntPartition, k: int, weights: Sequence[int] | None = None):
    weights = tuple(weights) if weights is not None else lam.parts
    if sorted(weights, reverse=True) != list(lam.parts):
        raise ValueError("weights must be a reordering of the parts of lambda")
    s = k - (lam.n - lam.d)
    if s < 0:
        return
    for mask, pf in _source_pushforwards(weights).items():
        size = bin(mask).count("1")
        if size > s or not pf:
            continue
        coords = gl2_coordinates(pf)
        for a, b in _e_monomials(s - size):
            yield (a, b, mask), _shift(coords, a, b)


def pushforward_ideal_piece(lam: IntPartition, k: int, weights: Sequence[int] | None = None) -> GradedSubspace:
    """Degree-k piece of the image of A_GL2((P^1)^d) under the lambda-weighted pushforward.

    ``weights`` may be any ordering of the parts of lambda.
    """
    piece = GradedSubspace(lam.n, k)
    for label, vec in _pushforward_vectors(lam, k, weights):
        piece.add(label, vec)
    return piece


# ---------------------------------------------------------------------------

def merged_generators(lam: IntPartition) -> list[ProjClass]:
    return [class_Z(mu) for mu in lam.merges()]


def two_generator_partitions(a: int, n: int) -> list[IntPartition]:
    """lambda = {a, 1^{n-a}} and its partner lambda' (or the merged set when degenerate)."""
    if not 1 <= a <= n:
        raise ValueError("need 1 <= a <= n")
    lam = IntPartition([a] + [1] * (n - a))
    if a == n:
        return lam.merges()
    if 2 * a != n:
        other = IntPartition([a + 1] + [1] * (n - a - 1))
    elif n - a - 2 >= 0:
        other = IntPartition([a, 2] + [1] * (n - a - 2))
    else:
        other = IntPartition([n])
    return [lam, other]


@dataclass
class RankRow:
    degree: int
    ambient: int
    full: int
    generated: int
    union: int

    @property
    def match(self) -> bool:
        return self.full == self.generated == self.union


def compare_ideal_ranks(lam: IntPartition, generators: Sequence[ProjClass] | None = None,
                        degree_bound: int | None = None) -> list[RankRow]:
    """Per-degree ranks of the pushforward ideal, the generated ideal and their sum."""
    n = lam.n
    bound = n + 2 if degree_bound is None else degree_bound
    gens = merged_generators(lam) if generators is None else list(generators)
    rows = []
    for k in range(bound + 1):
        full, gen, union = RowSpace(), RowSpace(), RowSpace()
        for _, vec in _pushforward_vectors(lam, k):
            full.add(vec)
            union.add(vec)
        for _, vec in _ideal_vectors(gens, k, n):
            gen.add(vec)
            union.add(vec)
        rows.append(RankRow(k, ambient_dimension(n, k), full.rank, gen.rank, union.rank))
    return rows


def verify_merged_generators(lam: IntPartition, degree_bound: int | None = None) -> bool:
    return all(r.match for r in compare_ideal_ranks(lam, None, degree_bound))


def verify_two_generators(a: int, n: int, degree_bound: int | None = None) -> bool:
    lam = IntPartition([a] + [1] * (n - a))
    gens = [class_Z(mu) for mu in two_generator_partitions(a, n)]
    return all(r.match for r in compare_ideal_ranks(lam, gens, degree_bound))


# ---------------------------------------------------------------------------
# Affine variant: constant-in-H parts inside Q[e1, e2]

def origin_class(n: int) -> Poly:
    """prod_{i=0}^{n} (i u + (n-i) v)."""
    u, v = UV.gens()
    out = UV.one
    for i in range(n + 1):
        out = out * (u * i + v * (n - i))
    return out


@dataclass
class AffineRankRow:
    degree: int
    full: int
    generated: int
    union: int

    @property
    def match(self) -> bool:
        return self.full == self.generated == self.union


def compare_affine_ranks(lam: IntPartition, generators: Sequence[ProjClass] | None = None,
                         degree_bound: int | None = None) -> list[AffineRankRow]:
    n = lam.n
    bound = n + 2 if degree_bound is None else degree_bound
    gens = merged_generators(lam) if generators is None else list(generators)
    gen0 = [(g.degree(), affine_coordinates(g.affine_part())) for g in gens if g.affine_part()]
    origin = affine_coordinates(origin_class(n))
    rows = []
    for k in range(bound + 1):
        full, gen, union = RowSpace(), RowSpace(), RowSpace()
        full_vecs = []
        for _, vec in _pushforward_vectors(lam, k):
            v0 = {key[:2]: x for key, x in vec.items() if key[2] == 0}
            if v0:
                full_vecs.append(v0)
        if k >= n + 1:
            for a, b in _e_monomials(k - n - 1):
                full_vecs.append(_shift(origin, a, b))
        for v in full_vecs:
            full.add(v)
        gen_vecs = []
        for dg, g0 in gen0:
            if dg <= k:
                for a, b in _e_monomials(k - dg):
                    gen_vecs.append(_shift(g0, a, b))
        for v in gen_vecs:
            gen.add(v)
        for v in full_vecs + gen_vecs:
            union.add(v)
        rows.append(AffineRankRow(k, full.rank, gen.rank, union.rank))
    return rows


def affine_ideal_check(lam: IntPartition, degree_bound: int | None = None,
                       generators: Sequence[ProjClass] | None = None) -> bool:
    return all(r.match for r in compare_affine_ranks(lam, generators, degree_bound))
