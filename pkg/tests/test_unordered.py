import random
from fractions import Fraction
from math import factorial, prod

import pytest
import sympy as sp

from conftest import localize_proj, multiplication_pushforward_oracle
from strata_chow import ordered, unordered
from strata_chow.partitions import IntPartition, enumerate_int_partitions, enumerate_set_partitions_all
from strata_chow.poly import E1, U, V, UV
from strata_chow.rings import OrderedClass, ProjClass
from strata_chow.unordered import (DenominatorResidue, StrataCombinationUnordered, ab1_decompose,
                                   class_unordered, class_Z, multiplicative_uplusv,
                                   multiplicative_uv, phi_pullback, phi_pushforward, reconstruct,
                                   relation_check, rewrite_to_ab1, square_move)

IP = IntPartition
Hn = ProjClass.H


def test_pullback():
    assert phi_pullback(Hn(2)) == OrderedClass.H(1, 2) + OrderedClass.H(2, 2)
    assert phi_pullback(ProjClass.one(3)) == OrderedClass.one(3)
    h1, h2 = OrderedClass.H(1, 2), OrderedClass.H(2, 2)
    assert phi_pullback(Hn(2) ** 2) == h1 * h1 + h1 * h2 * 2 + h2 * h2


def test_pushforward_example():
    a = (OrderedClass.H(1, 2) + U) * (OrderedClass.H(2, 2) + V)
    assert phi_pushforward(a) == (Hn(2) + U * 2) * (Hn(2) + V * 2)
    assert phi_pushforward(OrderedClass.one(2)) == ProjClass.scalar(2, 2)


def test_class_formula_against_localization():
    for n in range(1, 7):
        for lam in enumerate_int_partitions(n):
            got = localize_proj(class_unordered(lam))
            want = multiplication_pushforward_oracle(list(lam.parts))
            assert all(sp.simplify(a - b) == 0 for a, b in zip(got, want)), lam


def test_nonequivariant_degrees():
    # deg Z_lambda = (d! / prod e_i!) * prod a_i
    for n in range(1, 8):
        for lam in enumerate_int_partitions(n):
            deg = factorial(lam.d) // lam.normalization() * prod(lam.parts)
            assert class_Z(lam).specialize(0, 0) == ProjClass.H(n, n - lam.d) * deg
    assert class_Z(IP([3, 1])).specialize(0, 0) == Hn(4, 2) * 6
    assert class_Z(IP([2, 1, 1])).specialize(0, 0) == Hn(4, 1) * 6
    assert class_Z(IP([2, 2])).specialize(0, 0) == Hn(4, 2) * 4
    assert class_unordered(IP([2, 2])).specialize(0, 0) == Hn(4, 2) * 8


def test_class_examples():
    assert class_unordered(IP([2])) == Hn(2) * 2 + E1 * 2
    for n in range(1, 7):
        assert class_unordered(IP([1] * n)) == ProjClass.scalar(factorial(n), n)
        top = n * prod((U * i + V * (n - i) for i in range(1, n)), start=UV.one)
        assert class_unordered(IP([n])).affine_part() == top
    assert class_unordered(IP([2, 1])).affine_part() == E1 * 6


def test_fnr_all_set_partitions():
    for n in range(1, 6):
        for P in enumerate_set_partitions_all(n):
            assert phi_pushforward(ordered.delta_P(P)) == class_unordered(P.shape())


def test_weighted_pushforward_orderings():
    for parts in ([3, 1], [2, 2, 1], [3, 2, 1]):
        base = phi_pushforward(OrderedClass.one(len(parts)), parts)
        assert base == class_unordered(IP(parts))
        assert phi_pushforward(OrderedClass.one(len(parts)), parts[::-1]) == base


def test_projection_formula():
    rng = random.Random(3)
    from strata_chow.verification import random_ordered, random_proj
    for n in (2, 3, 4):
        for _ in range(3):
            x = random_proj(rng, n, rng.randint(0, 2))
            y = random_ordered(rng, n, rng.randint(0, 2))
            assert phi_pushforward(phi_pullback(x) * y) == x * phi_pushforward(y)


def test_ab1_examples():
    assert ab1_decompose(IP([2, 2, 2])) == {(1, 4): -1, (2, 3): 2}
    assert ab1_decompose(IP([3, 2])) == {(2, 3): 1}
    for n in range(2, 9):
        for lam in enumerate_int_partitions(n):
            if lam.d >= 2:
                coeffs = ab1_decompose(lam)
                total = ProjClass.zero(n)
                for (k1, k2), c in coeffs.items():
                    total = total + class_unordered(unordered.ab_partition(k1, k2, lam.d - 2)) * c
                assert total == class_unordered(lam)


def test_example_relation():
    S = StrataCombinationUnordered.parse("1*[4,1,1]+3*[2,2,2]-1*[3,2,1] @ n=6")
    v = relation_check(S)
    assert v.holds and v.by_polynomial and v.by_evaluation and v.by_certificate
    assert v.certificate.replay(S.normalized(), {})


def test_nonequivariant_only_relation():
    S = StrataCombinationUnordered(4, {IP([3, 1]): 4, IP([2, 2]): -6})
    v = relation_check(S)
    assert not v.holds and not v.by_evaluation and not v.by_polynomial
    assert v.nonequivariant_zero


def test_single_class_is_not_a_relation():
    for n in range(1, 7):
        assert not relation_check(StrataCombinationUnordered(n, {IP([n]): 1}))


def test_parse_errors():
    for bad in ("", "1*[4,1]+x", "[4,1] @ n=6", "2*[2,1] 3*[3]", "[2,1] @ m=3"):
        with pytest.raises(ValueError):
            StrataCombinationUnordered.parse(bad)
    S = StrataCombinationUnordered.parse("1/2*[2,1] - [3]")
    assert S.n == 3 and S.terms == {IP([2, 1]): Fraction(1, 2), IP([3]): -1}


def test_mixed_part_counts_checked_separately():
    # the z-polynomials of different part counts can cancel; the classes cannot
    n = 5
    lams = enumerate_int_partitions(n)
    from strata_chow.linalg import kernel_basis
    from strata_chow.verification import _zvector
    matrix = [[_zvector(l, n)[i] for l in lams] for i in range(n + 1)]
    kernel = kernel_basis(matrix)
    assert kernel
    for vec in kernel:
        S = StrataCombinationUnordered(n, dict(zip(lams, vec)))
        v = relation_check(S, certificate=False)
        assert v.by_polynomial == v.by_evaluation


def test_square_move_and_rewrite():
    assert square_move(IP([2, 2, 2])) == (IP([3, 2, 1]), IP([2, 3, 1]), IP([4, 1, 1]))
    with pytest.raises(ValueError):
        square_move(IP([3, 2, 1]))
    for n in range(3, 9):
        for lam in enumerate_int_partitions(n):
            final, cert = rewrite_to_ab1({lam: Fraction(1)})
            assert cert.replay({lam: 1}, final)
            assert all(unordered.is_ab1(mu) for mu in final)


def test_reconstruction():
    for n in range(1, 7):
        for lam in enumerate_int_partitions(n):
            beta = class_unordered(lam)
            assert reconstruct(beta.affine_part(), n, n) == beta
    assert reconstruct(UV.const(24), 4) == ProjClass.scalar(24, 4)


def test_reconstruction_needs_weight_n():
    beta = class_unordered(IP([2, 1]))
    for w in (1, 2, 4):
        try:
            out = reconstruct(beta.affine_part(), 3, w)
        except DenominatorResidue:
            continue
        assert out != beta


def test_multiplicative_examples():
    r = multiplicative_uplusv(1, 1, 1)
    assert r.holds and r.lhs == E1 * 18
    for args in ((2, 2, 2), (3, 2, 1)):
        assert multiplicative_uplusv(*args).holds
    r = multiplicative_uv(1, 1, 2)
    assert r.holds
    assert r.rhs == class_unordered(IP([2, 2])).affine_part() * 12 - class_unordered(IP([3, 1])).affine_part() * 12
    assert multiplicative_uv(2, 1, 2).holds
    with pytest.raises(ValueError):
        multiplicative_uv(1, 1, 1)


def test_multiplicative_all_small():
    for n in range(3, 11):
        for c in range(1, n - 1):
            for a in range(1, n - c):
                b = n - a - c
                multiplicative_uplusv(a, b, c)
                if c >= 2:
                    multiplicative_uv(a, b, c)


def test_ab1_basis_independent():
    from strata_chow.linalg import rank
    for n in range(2, 9):
        for c in range(0, n - 1):
            basis = [l for l in enumerate_int_partitions(n, c + 2) if unordered.is_ab1(l)]
            vecs = [{(i,) + e: x for i, p in enumerate(class_unordered(l).coeffs) for e, x in p.terms.items()}
                    for l in basis]
            assert rank(vecs) == len(basis)


def test_json_round_trip():
    S = StrataCombinationUnordered.parse("1*[4,1,1]+3*[2,2,2]-1*[3,2,1] @ n=6")
    data = S.to_json()
    assert data["schema"] == "strata-chow/1"
    beta = class_Z(IP([3, 2, 1]))
    assert ProjClass.from_json(beta.to_json()) == beta
