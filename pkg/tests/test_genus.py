from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shintani_padic.genus import (
    GenusConfig,
    HypothesisError,
    cor12_example,
    cor12_target,
    cor12_verify,
    fg_rhs,
    genus_char_on_cn,
    independence_verify,
    lemma44_sets,
    lemma44_verify,
    prop41_verify,
    regularizer,
    weighted_char_sum,
)
from shintani_padic.gamma import morita_gamma
from shintani_padic.kronecker import is_fundamental, kronecker_chi
from shintani_padic.lattice import CNIdeal, LatticeElement
from shintani_padic.padic import log_iwasawa

FUNDAMENTAL = [D for D in range(-40, 41) if D not in (0, 1) and is_fundamental(D)]


def _is_prime(n):
    return n > 1 and all(n % f for f in range(2, int(n**0.5) + 1))


def test_kronecker_examples():
    assert kronecker_chi(-4, 3) == -1
    assert kronecker_chi(-3, 2) == -1
    assert kronecker_chi(12, 5) == kronecker_chi(-3, 5) * kronecker_chi(-4, 5) == -1
    assert kronecker_chi(12, 7) == -1


def test_non_fundamental_rejected():
    for D in (-8 * 9, 12 * 4, 2, -1, 5 * 9):
        assert not is_fundamental(D)
        with pytest.raises(ValueError):
            kronecker_chi(D, 3)


@pytest.mark.parametrize("D", FUNDAMENTAL)
def test_kronecker_multiplicative_and_periodic(D):
    n = abs(D)
    for a in range(1, 3 * n):
        assert kronecker_chi(D, a) == kronecker_chi(D, a + n)
        for b in range(1, n + 1):
            assert kronecker_chi(D, a * b) == kronecker_chi(D, a) * kronecker_chi(D, b)


@pytest.mark.parametrize("D", FUNDAMENTAL)
def test_kronecker_against_splitting(D):
    for ell in filter(_is_prime, range(2, 200)):
        if D % ell == 0:
            expect = 0
        elif ell == 2:
            expect = 1 if D % 8 == 1 else -1
        else:
            expect = 1 if any((x * x - D) % ell == 0 for x in range(ell)) else -1
        assert kronecker_chi(D, ell) == expect


def test_genus_config_inertia():
    assert GenusConfig.create(-3, -4, 5, 12).inert_index == 1
    assert GenusConfig.create(-3, -4, 7, 12).inert_index == 2
    assert GenusConfig.create(-3, -4, 5).pair == (-3, -4)
    assert GenusConfig.create(-3, -4, 7).pair == (-4, -3)
    for p in (11, 13, 3, 2):
        with pytest.raises(HypothesisError):
            GenusConfig.create(-3, -4, p)
    with pytest.raises(HypothesisError):
        GenusConfig.create(-3, -4, 5, discriminant=24)
    with pytest.raises(HypothesisError):
        GenusConfig.create(-3, -3 * 4 * 2, 5)


def test_genus_character_values(config):
    cfg = GenusConfig.from_config(config, 5)
    assert [genus_char_on_cn(cfg, config.ideal(N)) for N in (3, 11, 13)] == [-1, -1, 1]
    assert [regularizer(cfg, config.ideal(N)) for N in (3, 11, 13)] == [4, 12, -12]


def test_genus_character_hypotheses(config):
    cfg = GenusConfig.from_config(config, 5)
    with pytest.raises(HypothesisError):
        genus_char_on_cn(cfg, CNIdeal(5, (1, 2)))
    with pytest.raises(HypothesisError):
        genus_char_on_cn(cfg, CNIdeal(9, (1, 4)))


def test_weighted_sums():
    assert weighted_char_sum(-3) == Fraction(-1, 3)
    assert weighted_char_sum(-4) == Fraction(-1, 2)


@pytest.mark.parametrize("p, m", [(5, 4), (7, 3), (17, 2), (29, 2), (19, 2), (31, 2)])
def test_fg_rhs_closed_forms(p, m):
    cfg = GenusConfig.create(-3, -4, p)
    base, coeff = cor12_target(p)
    assert fg_rhs(cfg, m) == log_iwasawa(morita_gamma(p, m, base)) * coeff


def test_fg_rhs_known_values():
    assert fg_rhs(GenusConfig.create(-3, -4, 5), 3).residue == 10
    assert fg_rhs(GenusConfig.create(-3, -4, 7), 3).residue == 175


def test_cor12_target():
    assert cor12_target(17) == (Fraction(1, 4), Fraction(4, 3))
    assert cor12_target(19) == (Fraction(1, 3), 2)
    with pytest.raises(HypothesisError):
        cor12_target(13)


@pytest.mark.parametrize("p, m", [(5, 2), (7, 2)])
def test_cor12_small(config, gamma_cache, p, m):
    assert cor12_verify(p, config.ideal(3), m, config, gamma_cache).passed
    report = cor12_example(p, m, config, gamma_cache)
    assert report.passed and report.details["full_is_square"]


def test_cor12_flags_the_other_factor(config, gamma_cache):
    report = cor12_verify(7, config.ideal(3), 2, config, gamma_cache)
    assert report.details["factor_4_matches"] is False


def test_cor12_rejects_other_primes(config):
    with pytest.raises(HypothesisError):
        cor12_verify(13, config.ideal(3), 2, config)


@pytest.mark.parametrize("p", [5, 7])
def test_prop41_small(config, gamma_cache, p):
    report = prop41_verify(p, config.ideal(3), 2, config, gamma_cache)
    assert report.passed, report.to_text()


def test_independence_small(config, gamma_cache):
    assert independence_verify(5, [3, 11], 1, config, gamma_cache).passed


def test_lemma44_n3(config):
    A, B, equal = lemma44_sets(config.ideal(3), config)
    sixth = Fraction(1, 6)
    assert B == {LatticeElement.of(sixth * k, sixth * k) for k in (1, 3, 5)}
    assert equal


@pytest.mark.parametrize("N", [3, 11, 13])
def test_lemma44_verify(config, N):
    report = lemma44_verify(config.ideal(N), config)
    assert report.passed and report.details["size_B"] == N


def test_lemma44_even_n(config):
    with pytest.raises(HypothesisError):
        lemma44_sets(CNIdeal(2, (1, 1)), config)


@given(st.sampled_from([D for D in FUNDAMENTAL if D < 0]), st.integers(1, 10**6), st.integers(1, 10**6))
def test_kronecker_multiplicative_random(D, a, b):
    assert kronecker_chi(D, a * b) == kronecker_chi(D, a) * kronecker_chi(D, b)
