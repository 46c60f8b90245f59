import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shintani_padic.cyclo import (
    CycloInt,
    DirichletChar,
    FieldError,
    build_field,
    comparison_trivial_char,
    cyclo_unit_identity,
    cyclotomic_poly,
    dh_admissible,
    dh_verify,
    embedding,
    euler_phi,
    fg_permutation,
    gamma_dist_sides,
    gamma_dist_verify,
    gauss_sum,
    mu_period_forms,
    mu_period_verify,
    t_value,
)


def _poly_from_roots(n):
    coeffs = np.array([1.0 + 0j])
    for k in range(1, n + 1):
        if math.gcd(k, n) == 1:
            coeffs = np.convolve(coeffs, [-cmath.exp(2j * cmath.pi * k / n), 1.0])
    return tuple(int(round(c.real)) for c in coeffs)


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_polynomials(n):
    assert cyclotomic_poly(n) == _poly_from_roots(n)
    assert len(cyclotomic_poly(n)) == euler_phi(n) + 1


conductors = st.sampled_from([1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 20])


@st.composite
def cyclo_ints(draw, n=None):
    n = n if n is not None else draw(conductors)
    vec = draw(st.lists(st.integers(-20, 20), min_size=1, max_size=2 * n))
    return CycloInt.of(n, vec)


@given(cyclo_ints(), cyclo_ints(), cyclo_ints())
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(cyclo_ints(), cyclo_ints())
def test_complex_evaluation_oracle(a, b):
    n = math.lcm(a.conductor, b.conductor)
    for k in (1, n - 1):
        if math.gcd(k, n) != 1:
            continue
        prod = (a * b).lift(n).to_complex(k)
        expect = a.lift(n).to_complex(k) * b.lift(n).to_complex(k)
        assert abs(prod - expect) <= 1e-9 * max(1.0, abs(expect))


@given(cyclo_ints(n=12), cyclo_ints(n=12), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_a_ring_map(a, b, g):
    assert (a * b).galois(g) == a.galois(g) * b.galois(g)
    assert (a + b).galois(g) == a.galois(g) + b.galois(g)
    assert abs(a.galois(g).to_complex() - a.to_complex(g)) < 1e-9 * max(1.0, abs(a.to_complex(g)))


def test_cross_conductor_equality():
    assert CycloInt.root(4, 2) == -1
    assert CycloInt.root(6, 2) == CycloInt.root(3, 1)
    assert CycloInt.root(3) + CycloInt.root(3, 2) == -1
    with pytest.raises(TypeError):
        hash(CycloInt.root(3))


def test_small_fields():
    f3 = build_field(3, 1)
    assert f3.generator == 2
    f9 = build_field(3, 2)
    g = f9.generator
    assert sorted(f9.power(g, k) for k in range(8)) == list(range(1, 9))
    assert f9.power(g, 8) == 1 and f9.power(g, 4) != 1
    fixed = [x for x in f9.elements() if f9.frobenius(x) == x]
    assert fixed == [0, 1, 2]


@pytest.mark.parametrize("p, nu", [(2, 3), (3, 3), (5, 2), (7, 2), (11, 1), (2, 5)])
def test_field_structure(p, nu):
    F = build_field(p, nu)
    q = F.q
    assert all(F.dlog(F.power(F.generator, a)) == a for a in range(q - 1))
    # the modulus has no factor of degree <= nu/2: no root in any proper subfield, and F is a field
    for a in range(1, q):
        inv = F.power(a, q - 2)
        assert F.mul(a, inv) == 1
    assert all(F.power(x, q) == x for x in F.elements())


def test_composite_characteristic():
    with pytest.raises(FieldError):
        build_field(9, 1)


@pytest.mark.parametrize("p, nu, big", [(3, 1, 2), (3, 1, 3), (5, 1, 2), (2, 2, 4), (3, 2, 4)])
def test_embedding_is_a_ring_map(p, nu, big):
    small, large = build_field(p, nu), build_field(p, big)
    emb = embedding(small, large)
    for a in small.elements():
        for b in small.elements():
            assert emb[small.mul(a, b)] == large.mul(emb[a], emb[b])
            assert emb[small.add(a, b)] == large.add(emb[a], emb[b])


def test_gauss_sum_f3():
    F = build_field(3, 1)
    g = gauss_sum(F, Fraction(1, 2))
    z3 = CycloInt.root(3)
    assert g == -(z3 - z3 * z3)
    assert g * g == -3


@pytest.mark.parametrize("p, nu", [(5, 1), (7, 1), (3, 2)])
def test_gauss_sum_products(p, nu):
    F = build_field(p, nu)
    q = F.q
    minus_one = F.power(F.generator, (q - 1) // 2)
    for j in range(1, q - 1):
        h = Fraction(j, q - 1)
        g, gbar = gauss_sum(F, h), gauss_sum(F, -h)
        sign = t_value(F, F.power(minus_one, j))
        assert g * gbar == sign * q
        assert abs(abs(g.to_complex()) ** 2 - q) < 1e-6


@pytest.mark.parametrize("p", [5, 7])
def test_galois_twists_gauss_sums(p):
    F = build_field(p, 1)
    q = F.q
    C = p * (q - 1)
    for c in range(1, p):
        # sigma fixes zeta_{q-1} and sends zeta_p to zeta_p^c
        s = next(s for s in range(1, C) if s % p == c and s % (q - 1) == 1)
        for j in range(1, q - 1):
            h = Fraction(j, q - 1)
            g = gauss_sum(F, h)
            twist = t_value(F, F.power(F.power(c, q - 2), j))
            assert g.galois(s) == twist * g


def test_gauss_sum_rejects_integral_h():
    with pytest.raises(FieldError):
        gauss_sum(build_field(5, 1), 1)
    with pytest.raises(FieldError):
        gauss_sum(build_field(5, 1), Fraction(1, 3))


@pytest.mark.parametrize("p, nup, h", [(3, 2, Fraction(1, 2)), (5, 2, Fraction(1, 4)), (7, 2, Fraction(1, 2))])
def test_davenport_hasse_examples(p, nup, h):
    assert dh_verify(p, 1, nup, h).passed


def test_davenport_hasse_f9_value():
    F3, F9 = build_field(3, 1), build_field(3, 2)
    assert gauss_sum(F9, Fraction(1, 2)) == -3
    assert gauss_sum(F3, Fraction(1, 2), ambient=F9) ** 2 == -3


def test_davenport_hasse_matrix_small():
    for p, nup in [(3, 2), (3, 3), (5, 2), (7, 2)]:
        for h in dh_admissible(p, 1, nup):
            assert dh_verify(p, 1, nup, h).passed


def test_davenport_hasse_degree_mismatch():
    with pytest.raises(FieldError):
        dh_verify(3, 2, 3, Fraction(1, 2))


def test_cyclotomic_unit_examples():
    r = cyclo_unit_identity(4, 3, 1)
    assert r.passed and r.details["product"] == CycloInt.root(4)
    assert cyclo_unit_identity(5, 2, 1).details["product"] == 1 + CycloInt.root(5)


def test_cyclotomic_unit_exhaustive():
    for M in range(1, 9):
        for N in range(1, 6):
            if math.gcd(M, N) != 1:
                continue
            for a in range(1, M):
                assert cyclo_unit_identity(M, N, a).passed


def test_cyclotomic_unit_rejects_zero():
    with pytest.raises(ValueError):
        cyclo_unit_identity(4, 3, 4)


def test_trivial_character_rejected():
    with pytest.raises(ValueError):
        DirichletChar(3, 1, tuple(CycloInt.integer(int(a % 3 != 0)) for a in range(3)))


@given(st.integers(1, 500), st.integers(1, 500))
def test_characters_are_multiplicative(a, b):
    for chi in (DirichletChar.kronecker(-4), DirichletChar.cyclic(5, 1), DirichletChar.cyclic(9, 2)):
        assert chi(a * b) == chi(a) * chi(b)
        assert (chi(a) == 0) == (math.gcd(a, chi.modulus) > 1)


def test_mu_period_kronecker_exhaustive():
    chi = DirichletChar.kronecker(-4)
    for a in range(25):
        assert mu_period_verify(chi, 3, 5, 2, a).passed
    first, second = mu_period_forms(chi, 3, 5, 2, 0)
    # a = 0: (1 - chi(3) 3) L(0, chi) with L(0, chi_{-4}) = 1/2, scaled by M = 4
    assert first == second == 8


def test_mu_period_cyclic_character():
    chi = DirichletChar.cyclic(5, 1)
    assert chi.order == 4
    assert all(mu_period_verify(chi, 3, 31, 1, a).passed for a in range(31))


def test_mu_period_precondition():
    with pytest.raises(ValueError):
        mu_period_verify(DirichletChar.kronecker(-4), 3, 7, 1, 0)


@pytest.mark.parametrize("M, N, p, n", [(3, 2, 5, 2), (4, 3, 5, 2), (4, 3, 7, 2), (3, 4, 5, 2), (2, 3, 7, 1)])
def test_fg_permutation(M, N, p, n):
    for d in range(M * N):
        r = fg_permutation(M, N, d, p, n)
        assert r.passed and r.details["candidate"] == "inverse-multiplication"
    assert fg_permutation(M, N, 0, p, n).details["size"] == p**n - p ** (n - 1)


def test_fg_permutation_precondition():
    with pytest.raises(ValueError):
        fg_permutation(4, 3, 0, 5, 1)


@pytest.mark.parametrize("p, M, N, d", [(5, 3, 2, 1), (7, 4, 3, 1), (5, 4, 3, 3), (7, 3, 2, 2), (5, 3, 1, 2)])
def test_gamma_distribution(p, M, N, d):
    assert gamma_dist_verify(p, M, N, d, 4).passed


def test_gamma_distribution_degenerate_n():
    lhs, rhs = gamma_dist_sides(7, 4, 1, 1, 3)
    assert lhs == rhs


def test_gamma_distribution_preconditions():
    with pytest.raises(ValueError):
        gamma_dist_verify(5, 4, 2, 1, 3)
    with pytest.raises(ValueError):
        gamma_dist_verify(5, 4, 3, 2, 3)


@pytest.mark.parametrize("p, M, N", [(5, 4, 3), (7, 3, 2), (5, 2, 3), (7, 2, 5)])
def test_comparison(p, M, N):
    r = comparison_trivial_char(p, M, N, 4)
    assert r.passed
    if M == 2:
        assert r.computed.residue == 0
