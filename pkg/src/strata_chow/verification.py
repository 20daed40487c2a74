"""Reproduction checks for the headline identities, one function per item.

Each check returns a :class:`CheckResult`; ``run_all`` drives them in order.
Everything is exact; the randomized checks use fixed seeds.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import ideals, ordered, pgl2, unordered
from .linalg import RowSpace, kernel_basis
from .partitions import (IntPartition, SetPartition, count_good, enumerate_int_partitions,
                         enumerate_set_partitions, enumerate_set_partitions_all, good_partitions,
                         rank)
from .poly import C23, UV, E1, U, V, Poly, difference_quotient, integrate, reduce_monic, upoly_mul
from .rings import OrderedClass, ProjClass


@dataclass
class CheckResult:
    key: str
    title: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.key} {self.title}: {self.detail}"


def _timed(key, title, fn) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(key, title, ok, detail, time.perf_counter() - t)


# ---------------------------------------------------------------------------

def check_square_relation_n4():
    n = 4
    d = lambda i, j: ordered.delta_ij(i, j, n)
    target = sum((OrderedClass.H(i, n) for i in range(1, 5)), OrderedClass.zero(n)) + E1 * 2
    lhs, rhs = d(1, 2) + d(3, 4), d(2, 3) + d(4, 1)
    rel = ordered.square_relation_class(SetPartition.singletons(4), 1, 2, 3, 4)
    ok = lhs - rhs == 0 and lhs == target and rhs == target and not rel
    return ok, f"both sides = {lhs}"


def _orbit_alpha(n=5):
    H = [OrderedClass.H(i, n) for i in range(1, n + 1)]
    e2 = OrderedClass.zero(n)
    for i in range(n):
        for j in range(i + 1, n):
            e2 = e2 + H[i] * H[j]
    return e2 + sum(H, OrderedClass.zero(n)) * (E1 * 2) + (U * U * 3 + U * V * 4 + V * V * 3)


def check_worked_decomposition():
    n = 5
    alpha = _orbit_alpha(n)
    sp = SetPartition.parse
    expected = ordered.StrataCombinationOrdered(n, {sp("1|2|3,4,5"): 1, sp("1,2|3|4,5"): 1, sp("1,2,3|4|5"): 1})
    got = ordered.decompose(alpha, 2)
    H = lambda i, m: OrderedClass.H(i, m)
    pr5 = alpha.pushforward(5)
    pr5_twist = (alpha * (H(5, 5) - H(4, 5))).pushforward(5)
    e2_3 = H(1, 4) * H(2, 4) + H(1, 4) * H(3, 4) + H(2, 4) * H(3, 4)
    checks = [
        got == expected,
        ordered.chain_orbit_class(n) == expected,
        pr5 == H(1, 4) + H(2, 4) + H(3, 4) + H(4, 4) + E1 * 2,
        pr5_twist == e2_3 + (H(1, 4) + H(2, 4) + H(3, 4)) * E1 + (U * U + U * V + V * V),
        pr5.pushforward(4) == OrderedClass.one(3),
        (pr5 * (H(4, 4) - H(3, 4))).pushforward(4) == H(1, 3) + H(2, 3) + E1,
        not pr5.pushforward(4).pushforward(3),
        (pr5.pushforward(4) * (H(3, 3) - H(2, 3))).pushforward(3) == OrderedClass.one(2),
        # tree leaves identified as strata
        pr5_twist == ordered.delta_P(sp("1,2,3|4")),
        (pr5 * (H(4, 4) - H(3, 4))).pushforward(4) == ordered.delta_P(sp("1,2|3")),
    ]
    return all(checks), f"decomposition {got}; intermediate pushforwards {sum(checks)}/{len(checks)}"


def delta_rank(k: int, n: int) -> int:
    rs = RowSpace()
    for P in good_partitions(n - k, n):
        vec = {}
        for mask, c in ordered.delta_P(P).coeffs.items():
            for e, x in c.terms.items():
                vec[(mask,) + e] = x
        rs.add(vec)
    return rs.rank


def check_ranks(max_n: int = 8):
    rows = []
    for n in range(2, max_n + 1):
        for k in range(0, n - 1):
            d = n - k
            direct, closed = count_good(d, n)
            r = delta_rank(k, n)
            if not (rank(k, n) == direct == closed == r):
                return False, f"mismatch at n={n}, k={k}: {rank(k, n)}, {direct}, {closed}, {r}"
            rows.append((n, k))
    return True, f"{len(rows)} (n, k) pairs agree"


def check_example_relation():
    S = unordered.StrataCombinationUnordered.parse("1*[4,1,1]+3*[2,2,2]-1*[3,2,1] @ n=6")
    v = unordered.relation_check(S, certificate=True)
    ok = v.holds and v.by_polynomial and v.by_evaluation and v.by_certificate
    return ok, (f"polynomial={v.by_polynomial}, evaluation={v.by_evaluation}, "
                f"certificate={v.by_certificate} ({len(v.certificate.moves)} moves)")


def check_fnr(max_n: int = 6):
    count = 0
    for n in range(1, max_n + 1):
        for d in range(1, n + 1):
            for P in enumerate_set_partitions(d, n):
                if unordered.phi_pushforward(ordered.delta_P(P)) != unordered.class_unordered(P.shape()):
                    return False, f"fails for {P}"
                count += 1
    return True, f"{count} set partitions"


def check_ab1(max_n: int = 8):
    count = 0
    for n in range(2, max_n + 1):
        for lam in enumerate_int_partitions(n):
            if lam.d < 2:
                continue
            coeffs = unordered.ab1_decompose(lam, verify=True)
            if not all(isinstance(c, int) for c in coeffs.values()):
                return False, f"non-integral coefficients for {lam}"
            count += 1
        for c in range(0, n - 1):
            rs = RowSpace()
            basis = [lam for lam in enumerate_int_partitions(n, c + 2) if unordered.is_ab1(lam)]
            for lam in basis:
                vec = {}
                for i, p in enumerate(unordered.class_unordered(lam).coeffs):
                    for e, x in p.terms.items():
                        vec[(i,) + e] = x
                if not rs.add(vec):
                    return False, f"[a,b,1^{c}] classes dependent at n={n}"
    return True, f"{count} partitions decomposed; independence for every c"


def check_mod2(max_n: int = 10):
    count = special = oracle = 0
    for n in range(2, max_n + 1, 2):
        for lam in enumerate_int_partitions(n):
            m = pgl2.pgl2_mod2_class(lam)
            if lam.is_special():
                special += 1
                if not m:
                    return False, f"special {lam} vanishes"
                if m != pgl2.Mod2Class(n, pgl2.upoly_exact_div(list(pgl2.q_coeffs(n)), list(pgl2.q_coeffs(lam.d)), C23.zero)):
                    return False, f"{lam}: not q_n/q_d"
            elif m:
                return False, f"non-special {lam} does not vanish"
            ic = pgl2.pgl2_integral_class(lam)
            if not ic.consistent:
                return False, f"{lam}: GL2 image disagrees mod 2"
            if all(e % 2 == 0 for e in lam.multiplicities().values()):
                if pgl2.mod2_class_by_integration(lam) != m:
                    return False, f"{lam}: integration oracle disagrees"
                oracle += 1
            count += 1
    return True, f"{count} partitions ({special} special); GL2 image agrees for all, integration oracle for {oracle}"


def _zvector(lam: IntPartition, n: int) -> list[Fraction]:
    p = unordered._zproduct(lam.parts)
    norm = lam.normalization()
    return [Fraction(p[i], norm) if i < len(p) else Fraction(0) for i in range(n + 1)]


def check_relation_equivalence(samples: int = 200, seed: int = 20240611):
    rng = random.Random(seed)
    agree = relations = halved = 0
    kernels = {}
    for n in (4, 5, 6):
        for d in range(1, n + 1):
            lams = enumerate_int_partitions(n, d)
            matrix = [[_zvector(lam, n)[i] for lam in lams] for i in range(n + 1)]
            basis = []
            for vec in kernel_basis(matrix):
                den = lcm(*(x.denominator for x in vec))
                basis.append([int(x * den) for x in vec])
            kernels[n, d] = (lams, basis)
    for s in range(samples):
        n = (4, 5, 6)[s % 3]
        with_kernel = [d for d in range(1, n + 1) if kernels[n, d][1]]
        d = rng.choice(with_kernel) if s % 2 and with_kernel else rng.randint(1, n)
        lams, basis = kernels[n, d]
        if s % 2 and basis:
            coeffs = [0] * len(lams)
            for vec in basis:
                c = rng.randint(-3, 3)
                coeffs = [a + c * b for a, b in zip(coeffs, vec)]
            if s % 4 == 1:
                coeffs = [2 * a for a in coeffs]
        elif s % 5 == 0:
            # mixed numbers of parts: one arbitrary coefficient per partition of n
            lams = enumerate_int_partitions(n)
            coeffs = [rng.randint(-4, 4) for _ in lams]
        else:
            coeffs = [rng.randint(-4, 4) for _ in lams]
        terms = {lam: a for lam, a in zip(lams, coeffs) if a}
        S = unordered.StrataCombinationUnordered(n, terms)
        by_poly = not S.z_polynomials()
        by_eval = not S.evaluate()
        if by_poly != by_eval:
            return False, f"criteria disagree on {S}"
        agree += 1
        if by_poly:
            relations += 1
            if not pgl2.pgl2_relation_zero(terms):
                return False, f"GL2 relation {S} fails in PGL2"
            if terms and all(a % 2 == 0 for a in terms.values()):
                half = {lam: a // 2 for lam, a in terms.items()}
                H = unordered.StrataCombinationUnordered(n, half)
                if H.z_polynomials() or H.evaluate() or not pgl2.pgl2_relation_zero(half):
                    return False, f"halving {S} breaks the relation"
                halved += 1
    return True, f"{agree} samples agree ({relations} relations, {halved} even relations halved)"


def check_excision(max_n: int = 6):
    count = 0
    for n in range(1, max_n + 1):
        for lam in enumerate_int_partitions(n):
            bound = n + 2
            if not ideals.verify_merged_generators(lam, bound):
                return False, f"merged generators fail for {lam}"
            if not ideals.affine_ideal_check(lam, bound):
                return False, f"affine merged check fails for {lam}"
            count += 1
        for a in range(1, n + 1):
            lam = IntPartition([a] + [1] * (n - a))
            gens = [unordered.class_Z(mu) for mu in ideals.two_generator_partitions(a, n)]
            if not ideals.verify_two_generators(a, n, n + 2):
                return False, f"two generators fail for a={a}, n={n}"
            if not ideals.affine_ideal_check(lam, n + 2, gens):
                return False, f"affine two-generator check fails for a={a}, n={n}"
    return True, f"{count} partitions, degrees <= n+2"


def check_appendix(max_n: int = 10):
    a1 = a2 = 0
    for n in range(3, max_n + 1):
        for c in range(1, n - 1):
            for a in range(1, n - c):
                b = n - a - c
                if not unordered.multiplicative_uplusv(a, b, c, check=False).holds:
                    return False, f"(u+v) identity fails at {(a, b, c)}"
                a1 += 1
                if c >= 2:
                    if not unordered.multiplicative_uv(a, b, c, check=False).holds:
                        return False, f"uv identity fails at {(a, b, c)}"
                    a2 += 1
    return True, f"{a1} (u+v) and {a2} uv instances"


# -- property suite ----------------------------------------------------------

def random_forest(P: SetPartition, rng: random.Random) -> list[tuple[int, int]]:
    edges = []
    for part in P.parts:
        order = list(part)
        rng.shuffle(order)
        for t in range(1, len(order)):
            edges.append((order[t], order[rng.randrange(t)]))
    return edges


def random_uv(rng: random.Random, deg: int, lo=-3, hi=3) -> Poly:
    return Poly({(a, deg - a): rng.randint(lo, hi) for a in range(deg + 1)}, UV)


def random_ordered(rng: random.Random, n: int, deg: int) -> OrderedClass:
    coeffs = {}
    for mask in range(1 << n):
        s = bin(mask).count("1")
        if s <= deg and rng.random() < 0.5:
            coeffs[mask] = random_uv(rng, deg - s)
    return OrderedClass(n, coeffs)


def random_proj(rng: random.Random, n: int, deg: int) -> ProjClass:
    return ProjClass(n, [random_uv(rng, deg - i) if i <= deg else UV.zero for i in range(n + 1)])


def property_checks(seed: int = 7) -> list[tuple[str, bool]]:
    rng = random.Random(seed)
    out = []
    # forest independence
    ok = True
    for n in range(1, 8):
        for d in range(1, n + 1):
            parts = enumerate_set_partitions(d, n)
            for P in rng.sample(parts, min(len(parts), 6)):
                target = ordered.delta_P(P)
                for _ in range(2):
                    ok &= ordered.spanning_forest_product(P, random_forest(P, rng)) == target
    out.append(("forest independence", ok))
    # diagonal relations
    ok = all(ordered.delta_ij(1, 2, n) * ordered.delta_ij(1, 3, n) ==
             ordered.delta_ij(1, 2, n) * ordered.delta_ij(2, 3, n) for n in range(3, 7))
    out.append(("diagonal relations", ok))
    # merge identity
    ok = True
    for n in range(2, 7):
        pool = enumerate_set_partitions_all(n)
        for P in rng.sample(pool, min(8, len(pool))):
            if P.d < 2:
                continue
            i, j = rng.sample(range(1, n + 1), 2)
            if P.same_part(i, j):
                continue
            ok &= ordered.delta_ij(i, j, n) * ordered.delta_P(P) == ordered.delta_P(P.merge(i, j))
    out.append(("merge identity", ok))
    # projection formula
    ok = True
    for n in range(1, 6):
        for _ in range(3):
            x = random_proj(rng, n, rng.randint(0, n))
            y = random_ordered(rng, n, rng.randint(0, n))
            ok &= unordered.phi_pushforward(unordered.phi_pullback(x) * y) == x * unordered.phi_pushforward(y)
    out.append(("projection formula", ok))
    # u <-> v symmetry
    ok = all(ordered.delta_P(P).swap_uv() == ordered.delta_P(P)
             for n in range(1, 7) for P in enumerate_set_partitions_all(n))
    out.append(("u<->v symmetry", ok))
    # reconstruction with weight n
    ok = all(unordered.reconstruct(unordered.class_unordered(lam).affine_part(), n, n) ==
             unordered.class_unordered(lam)
             for n in range(1, 7) for lam in enumerate_int_partitions(n))
    out.append(("reconstruction", ok))
    # integration identity over Z[u,v] and F_2[c2,c3]
    ok = True
    for ring, rnd in ((UV, lambda: random_uv(rng, rng.randint(0, 2))),
                      (C23, lambda: Poly({(rng.randint(0, 2), rng.randint(0, 1)): 1}, C23))):
        for _ in range(20):
            deg = rng.randint(1, 6)
            P = [rnd() for _ in range(deg)] + [ring.one]
            t = rnd()
            g = [rnd() for _ in range(rng.randint(1, 8))]
            lhs = integrate(upoly_mul(difference_quotient(P, t, ring.zero), g, ring.zero), P, ring.zero)
            g_red = reduce_monic(g, P, ring.zero)
            rhs = ring.zero
            tp = ring.one
            for c in g_red:
                rhs = rhs + c * tp
                tp = tp * t
            ok &= lhs == rhs
    out.append(("integration identity", ok))
    return out


def check_properties():
    res = property_checks()
    bad = [name for name, ok in res if not ok]
    return not bad, ", ".join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in res)


CHECKS = [
    ("1", "square relation at n=4", check_square_relation_n4),
    ("2", "worked decomposition at n=5", check_worked_decomposition),
    ("3", "rank agreement n<=8", check_ranks),
    ("4", "[Z411]+3[Z222]=[Z321]", check_example_relation),
    ("5", "pushforward of Delta_P, n<=6", check_fnr),
    ("6", "[a,b,1^c] basis, n<=8", check_ab1),
    ("7", "mod-2 classes, even n<=10", check_mod2),
    ("8", "relation criteria, 200 samples", check_relation_equivalence),
    ("9", "excision ideals, n<=6", check_excision),
    ("10", "multiplicative identities, n<=10", check_appendix),
    ("11", "property suite", check_properties),
]


def run_check(key: str) -> CheckResult:
    for k, title, fn in CHECKS:
        if k == key:
            return _timed(k, title, fn)
    raise KeyError(key)


def run_all() -> list[CheckResult]:
    return [_timed(k, title, fn) for k, title, fn in CHECKS]
