import math

import pytest

from fourfx.market import (
    ARBITRAGES,
    Chain,
    Currency,
    GeneratorBasis,
    RateEnsemble,
    STRONG_ARBITRAGES,
    activation,
    active_flags,
    apply_arbitrage,
    apply_chain,
    apply_strong,
    balance_three,
    chain_from_json,
    chain_to_json,
    discrepancies,
    ensemble_from_json,
    ensemble_to_json,
    is_balanced,
    make_perturbed,
    reciprocal_rate,
)

LOG2 = math.log(2.0)


@pytest.fixture
def basis():
    return GeneratorBasis.single(2.0)


@pytest.fixture
def r_alpha(basis):
    return make_perturbed(basis, 1)


def test_operator_table_shape():
    assert len(ARBITRAGES) == 24
    assert len(STRONG_ARBITRAGES) == 12
    pairs = [(s.member_pos, s.member_neg) for s in STRONG_ARBITRAGES]
    assert pairs == [(1, 7), (2, 8), (3, 13), (4, 14), (5, 19), (6, 20),
                     (9, 15), (10, 16), (11, 21), (12, 22), (17, 23), (18, 24)]


def test_reciprocal_rate_direct_and_inverse():
    r = RateEnsemble.from_rates((2.0, 1.0, 1.0, 1.0, 1.0, 1.0))
    assert reciprocal_rate(r, Currency.USD, Currency.EUR) == pytest.approx(2.0)
    assert reciprocal_rate(r, Currency.EUR, Currency.USD) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        reciprocal_rate(r, Currency.USD, Currency.USD)


def test_is_balanced_examples():
    assert is_balanced(RateEnsemble.from_rates((1,) * 6))
    balanced = RateEnsemble.from_rates((2.0, 6.0, 8.0, 3.0, 4.0, 8.0 / 6.0))
    assert is_balanced(balanced)
    broken = RateEnsemble.from_rates((2.0, 6.0, 8.0, 4.0, 4.0, 8.0 / 6.0))
    assert not is_balanced(broken)


def test_discrepancies_balanced_and_perturbed(basis, r_alpha):
    assert discrepancies(RateEnsemble.from_rates((2.0, 6.0, 8.0, 3.0, 4.0, 8.0 / 6.0))).is_zero(1e-12)
    d1 = discrepancies(r_alpha)
    assert d1.coeffs == ((1,), (1,), (0,))
    assert d1.values == pytest.approx((LOG2, LOG2, 0.0))
    d6 = discrepancies(make_perturbed(basis, 6))
    assert d6.coeffs == ((0,), (0,), (1,))


def test_activation_examples():
    # r_de=1, r_dp=1, r_ep=2, rest balanced in the sub-market sense
    r = RateEnsemble.from_rates((1.0, 1.0, 1.0, 2.0, 1.0, 1.0))
    assert activation(r, 3)      # indirect dollar->euro->sterling beats direct
    assert activation(r, 7)
    balanced = RateEnsemble.from_rates((2.0, 6.0, 8.0, 3.0, 4.0, 8.0 / 6.0))
    assert not any(active_flags(balanced))


def test_apply_arbitrage_examples(r_alpha):
    balanced = RateEnsemble.from_rates((2.0, 6.0, 8.0, 3.0, 4.0, 8.0 / 6.0))
    for k in range(1, 25):
        assert apply_arbitrage(balanced, k) == balanced
    r = RateEnsemble.from_rates((1.0, 1.0, 1.0, 2.0, 1.0, 1.0))
    assert apply_arbitrage(r, 3).rates[1] == pytest.approx(2.0)
    # oracle: direct evaluation of the row-15 action on the perturbed start
    after = apply_arbitrage(r_alpha, 15)
    assert after.coeffs[3] == (-1,)
    assert math.exp(after.log_rates[3]) == pytest.approx(0.5)


def test_apply_strong_examples(basis, r_alpha):
    # numeric balanced states are fixed up to recomputation roundoff; lattice
    # balanced states are fixed exactly (zero coefficient rows stay zero)
    balanced_num = RateEnsemble.from_rates((2.0, 6.0, 8.0, 3.0, 4.0, 8.0 / 6.0))
    balanced_lat = RateEnsemble.lattice(basis, [[0]] * 6)
    for i in range(1, 13):
        after = apply_strong(balanced_num, i)
        assert after.log_rates == pytest.approx(balanced_num.log_rates, abs=1e-12)
        assert apply_strong(balanced_lat, i) == balanced_lat
        twice = apply_strong(apply_strong(r_alpha, i), i)
        assert twice == apply_strong(r_alpha, i)
    after = apply_strong(r_alpha, 7)
    assert after.coeffs[3] == (-1,)
    assert discrepancies(after).coeffs == ((0,), (1,), (0,))


def test_apply_chain_examples(r_alpha):
    assert apply_chain(r_alpha, Chain(items=())) == [r_alpha]
    # oracle: stepwise log-domain evaluation
    traj = apply_chain(r_alpha, Chain(items=(15, 18)))
    assert discrepancies(traj[-1]).coeffs == ((0,), (1,), (1,))


def test_balance_three_cases():
    # dollar first: the dollar/euro rate moves to the cross-implied value
    out = balance_three(1.0, 4.0, 8.0, Currency.USD)
    assert out == pytest.approx((0.5, 4.0, 8.0))
    out = balance_three(1.0, 4.0, 8.0, Currency.EUR)
    assert out == pytest.approx((1.0, 4.0, 4.0))
    out = balance_three(1.0, 4.0, 8.0, Currency.GBP)
    assert out == pytest.approx((1.0, 8.0, 8.0))
    assert balance_three(2.0, 6.0, 3.0, Currency.GBP) == pytest.approx((2.0, 6.0, 3.0))
    with pytest.raises(ValueError):
        balance_three(-1.0, 1.0, 1.0, Currency.USD)
    with pytest.raises(ValueError):
        balance_three(1.0, 1.0, 1.0, Currency.JPY)


def test_make_perturbed_validation(basis):
    with pytest.raises(ValueError):
        make_perturbed(basis, 0)
    r = make_perturbed(basis, 4)
    assert discrepancies(r).coeffs == ((1,), (0,), (0,))
    r3 = make_perturbed(basis, 3)
    assert discrepancies(r3).coeffs == ((0,), (-1,), (-1,))


def test_lattice_numeric_agreement(r_alpha):
    numeric = RateEnsemble.from_log_rates(r_alpha.log_rates)
    lat, num = r_alpha, numeric
    for k in (15, 10, 3, 21, 12, 8, 23, 18, 2, 2, 7):
        lat = apply_arbitrage(lat, k)
        num = apply_arbitrage(num, k)
        assert max(abs(x - y) for x, y in zip(lat.log_rates, num.log_rates)) < 1e-9
        assert all(isinstance(c, int) for row in lat.coeffs for c in row)


def test_serialization_round_trip(r_alpha):
    for r in (r_alpha, RateEnsemble.from_log_rates((0.1, -0.2, 0.3, 1.0, -1.5, 0.25))):
        text = ensemble_to_json(r)
        again = ensemble_from_json(text)
        assert ensemble_to_json(again) == text
        assert again == r
    chain = Chain(items=(15, 10, 3), period=None)
    assert chain_from_json(chain_to_json(chain)) == chain
    periodic = Chain(items=(3, 4), period=2)
    assert chain_from_json(chain_to_json(periodic)) == periodic


def test_chain_validation():
    with pytest.raises(ValueError):
        Chain(items=(0,))
    with pytest.raises(ValueError):
        Chain(items=(25,))
    with pytest.raises(ValueError):
        Chain(items=(1, 2), period=3)


def test_generator_basis_validation():
    with pytest.raises(ValueError):
        GeneratorBasis.single(1.0)
    with pytest.raises(ValueError):
        GeneratorBasis(names=("a",), values=(0.0,))
    with pytest.raises(ValueError):
        GeneratorBasis(names=("a", "b", "c"), values=(1.0, 2.0, 3.0))
