import numpy as np
import pytest

from dictatest import (
    BooleanFunction,
    RealPointFunction,
    Spectrum,
    influence,
    influence_combinatorial,
    inverse_wht,
    low_degree_influence,
    product_function,
    spectrum_counts,
    subset_zeta,
    wht,
)
from dictatest.families import dictator, parity, random_folded


def naive_wht(table):
    """Definition-level transform: coeffs[α] = 2^-n Σ_x f(x) (-1)^{<α,x>}."""
    size = len(table)
    out = np.zeros(size)
    for alpha in range(size):
        for x in range(size):
            out[alpha] += table[x] * (-1) ** bin(alpha & x).count("1")
    return out / size


def random_boolean(n, rng):
    return BooleanFunction(n, 1 - 2 * rng.integers(0, 2, size=1 << n))


# ---------------------------------------------------------------------------
# Transform
# ---------------------------------------------------------------------------


def test_wht_dictator_single_coefficient():
    for n in (1, 2, 3):
        for i in range(1, n + 1):
            coeffs = wht(dictator(n, i)).coeffs
            expected = np.zeros(1 << n)
            expected[1 << (i - 1)] = 1.0
            assert np.array_equal(coeffs, expected)


def test_wht_constant():
    f = BooleanFunction(3, np.ones(8, dtype=np.int8))
    coeffs = wht(f).coeffs
    assert coeffs[0] == 1.0
    assert np.all(coeffs[1:] == 0.0)


def test_wht_worked_example_n2():
    f = BooleanFunction(2, np.array([1, 1, 1, -1], dtype=np.int8))
    assert list(wht(f).coeffs) == [0.5, 0.5, 0.5, -0.5]


def test_wht_matches_naive_definition():
    rng = np.random.default_rng(10)
    for n in (1, 2, 3):
        for _ in range(10):
            f = random_boolean(n, rng)
            assert np.allclose(wht(f).coeffs, naive_wht(f.table), atol=1e-12)
            g = RealPointFunction(n, rng.uniform(-1, 1, size=1 << n))
            assert np.allclose(wht(g).coeffs, naive_wht(g.table), atol=1e-12)


def test_spectrum_counts_exact():
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = random_boolean(4, rng)
        assert np.array_equal(spectrum_counts(f), wht(f).coeffs * 16)


def test_parseval_boolean():
    rng = np.random.default_rng(12)
    for n in (1, 3, 5):
        for _ in range(10):
            assert abs(wht(random_boolean(n, rng)).power() - 1.0) <= 1e-9


def test_inverse_single_coefficient_gives_character():
    for n in (1, 2, 3):
        for alpha in range(1 << n):
            coeffs = np.zeros(1 << n)
            coeffs[alpha] = 1.0
            table = inverse_wht(Spectrum(n, coeffs)).table
            assert np.array_equal(table, parity(n, alpha).table.astype(float))


def test_inverse_roundtrip_100_random_tables():
    rng = np.random.default_rng(13)
    for _ in range(100):
        f = RealPointFunction(4, rng.uniform(-1, 1, size=16))
        back = inverse_wht(wht(f))
        assert np.max(np.abs(back.table - f.table)) <= 1e-12


def test_inverse_zero_spectrum():
    out = inverse_wht(Spectrum(3, np.zeros(8)))
    assert np.all(out.table == 0.0)


def test_folded_zero_mode_is_exactly_zero():
    for seed in range(20):
        f = random_folded(4, seed)
        assert wht(f).coeffs[0] == 0.0


# ---------------------------------------------------------------------------
# Influence
# ---------------------------------------------------------------------------


def test_influence_dictator_and_parity():
    f = dictator(4, 2)
    s = wht(f)
    for i in range(1, 5):
        assert influence(s, i) == (1.0 if i == 2 else 0.0)
    g = wht(parity(4, {1, 3}))
    for i in range(1, 5):
        assert influence(g, i) == (1.0 if i in (1, 3) else 0.0)


def test_influence_worked_example():
    s = wht(BooleanFunction(2, np.array([1, 1, 1, -1], dtype=np.int8)))
    assert influence(s, 1) == 0.5


def test_influence_combinatorial_examples():
    assert influence_combinatorial(dictator(3, 2), 2) == 1.0
    const = BooleanFunction(3, np.ones(8, dtype=np.int8))
    for i in (1, 2, 3):
        assert influence_combinatorial(const, i) == 0.0


def test_influence_two_definitions_agree_exactly():
    rng = np.random.default_rng(14)
    for _ in range(200):
        f = random_boolean(4, rng)
        s = wht(f)
        for i in range(1, 5):
            assert influence(s, i) == influence_combinatorial(f, i)


def test_influence_coordinate_range():
    s = wht(dictator(3, 1))
    with pytest.raises(ValueError):
        influence(s, 0)
    with pytest.raises(ValueError):
        influence(s, 4)


def test_low_degree_influence_full_parity_vanishes():
    for n in (2, 3, 4):
        s = wht(parity(n, (1 << n) - 1))
        for i in range(1, n + 1):
            assert low_degree_influence(s, i, 1) == 0.0
            assert low_degree_influence(s, i, n - 1) == 0.0


def test_low_degree_influence_dictator():
    s = wht(dictator(4, 3))
    assert low_degree_influence(s, 3, 1) == 1.0


def test_low_degree_influence_monotone_and_caps_at_full():
    rng = np.random.default_rng(15)
    for _ in range(20):
        f = random_boolean(4, rng)
        s = wht(f)
        for i in range(1, 5):
            values = [low_degree_influence(s, i, w) for w in range(5)]
            assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))
            assert values[-1] == influence(s, i)


def test_low_degree_influence_range_checks():
    s = wht(dictator(3, 1))
    with pytest.raises(ValueError):
        low_degree_influence(s, 1, 4)
    with pytest.raises(ValueError):
        low_degree_influence(s, 1, -1)


# ---------------------------------------------------------------------------
# Subset zeta
# ---------------------------------------------------------------------------


def naive_subset_sums(coeffs):
    size = len(coeffs)
    out = np.zeros(size)
    for alpha in range(size):
        for beta in range(size):
            if beta & ~alpha == 0:
                out[alpha] += coeffs[beta]
    return out


def test_subset_zeta_identities():
    rng = np.random.default_rng(16)
    s = wht(RealPointFunction(3, rng.uniform(-1, 1, size=8)))
    z = subset_zeta(s)
    assert z[0] == s.coeffs[0]
    # at the full set the sum is the inversion formula at the origin
    assert abs(z[-1] - inverse_wht(s).table[0]) <= 1e-12


def test_subset_zeta_matches_naive_double_loop():
    rng = np.random.default_rng(17)
    for _ in range(20):
        s = Spectrum(3, rng.uniform(-1, 1, size=8))
        assert np.allclose(subset_zeta(s), naive_subset_sums(s.coeffs), atol=1e-12)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


def test_product_of_characters_is_character_sum():
    for a in range(8):
        for b in range(8):
            prod = product_function([parity(3, a).as_real(), parity(3, b).as_real()])
            assert np.array_equal(prod.table, parity(3, a ^ b).table.astype(float))


def test_product_singleton_identity():
    f = RealPointFunction(2, np.array([0.5, -0.25, 1.0, 0.0]))
    assert np.array_equal(product_function([f]).table, f.table)


def test_product_pointwise_and_bounded():
    rng = np.random.default_rng(18)
    a = RealPointFunction(3, rng.uniform(-1, 1, size=8))
    b = RealPointFunction(3, rng.uniform(-1, 1, size=8))
    prod = product_function([a, b])
    assert np.array_equal(prod.table, a.table * b.table)
    assert np.max(np.abs(prod.table)) <= 1.0


def test_product_validation():
    with pytest.raises(ValueError):
        product_function([])
    with pytest.raises(ValueError):
        product_function(
            [
                RealPointFunction(2, np.zeros(4)),
                RealPointFunction(3, np.zeros(8)),
            ]
        )


def test_influence_of_product_bounded_functions():
    rng = np.random.default_rng(19)
    for _ in range(100):
        fs = [RealPointFunction(3, rng.uniform(-1, 1, size=8)) for _ in range(3)]
        prod_s = wht(product_function(fs))
        member_s = [wht(f) for f in fs]
        for i in (1, 2, 3):
            bound = 3 * sum(influence(s, i) for s in member_s)
            assert influence(prod_s, i) <= bound + 1e-9


def test_influence_of_product_boolean_union_bound():
    rng = np.random.default_rng(20)
    for _ in range(100):
        fs = [random_boolean(3, rng) for _ in range(3)]
        prod_s = wht(product_function([f.as_real() for f in fs]))
        member_s = [wht(f) for f in fs]
        for i in (1, 2, 3):
            bound = sum(influence(s, i) for s in member_s)
            assert influence(prod_s, i) <= bound + 1e-9
