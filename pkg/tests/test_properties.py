"""Property-based invariants of the operator algebra."""

import math

from hypothesis import given, settings, strategies as st

from fourfx import linalg
from fourfx.market import (
    Currency,
    GeneratorBasis,
    RateEnsemble,
    activation,
    apply_arbitrage,
    apply_strong,
    discrepancies,
    is_balanced,
    make_perturbed,
    reciprocal_rate,
)

logs = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
ensembles = st.builds(
    lambda xs: RateEnsemble.from_log_rates(tuple(xs)),
    st.lists(logs, min_size=6, max_size=6),
)
balanced_ensembles = st.builds(
    lambda l1, l2, l3: RateEnsemble.from_log_rates(
        (l1, l2, l3, l2 - l1, l3 - l1, l3 - l2)
    ),
    logs, logs, logs,
)
arb_indices = st.integers(min_value=1, max_value=24)
strong_indices = st.integers(min_value=1, max_value=12)


@given(balanced_ensembles, arb_indices)
def test_balanced_states_are_fixed(r, k):
    assert apply_arbitrage(r, k) == r


@given(ensembles, strong_indices)
def test_strong_idempotent(r, i):
    once = apply_strong(r, i)
    assert apply_strong(once, i) == once


@given(ensembles)
def test_reciprocal_product_is_one(r):
    for frm in Currency:
        for to in Currency:
            if frm != to:
                assert abs(reciprocal_rate(r, frm, to) * reciprocal_rate(r, to, frm) - 1.0) < 1e-9


@given(ensembles, arb_indices)
def test_apply_balances_the_route(r, k):
    """After an active arbitrage, its own indirect route is exactly closed."""
    after = apply_arbitrage(r, k)
    if after != r:
        from fourfx.market import arbitrage

        op = arbitrage(k)
        gap = sum(v * x for v, x in zip(op.condition, after.log_rates))
        assert abs(gap) < 1e-9


@given(ensembles, strong_indices)
def test_discrepancy_locality(r, i):
    lhs = discrepancies(apply_strong(r, i)).values
    rhs = linalg.vec_mat(discrepancies(r).values, linalg.g_matrix(i))
    assert max(abs(x - y) for x, y in zip(lhs, rhs)) < 1e-9


@given(st.integers(min_value=1, max_value=6),
       st.lists(arb_indices, min_size=0, max_size=40))
@settings(max_examples=60)
def test_lattice_walks_stay_integral_and_match_numeric(which, word):
    basis = GeneratorBasis.single(1.5, base=(0.1, -0.3, 0.7))
    lat = make_perturbed(basis, which)
    num = RateEnsemble.from_log_rates(lat.log_rates)
    for k in word:
        lat = apply_arbitrage(lat, k)
        num = apply_arbitrage(num, k)
    assert all(isinstance(c, int) for row in lat.coeffs for c in row)
    assert max(abs(x - y) for x, y in zip(lat.log_rates, num.log_rates)) < 1e-9


@given(st.lists(strong_indices, min_size=0, max_size=40))
@settings(max_examples=60)
def test_single_step_discrepancies_stay_in_vertex_set(word):
    from fourfx.semigroup import vertex_label_single

    basis = GeneratorBasis.single(2.0)
    r = make_perturbed(basis, 1)
    for i in word:
        r = apply_strong(r, i)
        label = vertex_label_single(tuple(row[0] for row in discrepancies(r).coeffs))
        assert label is not None


@given(ensembles, arb_indices)
def test_activation_ties_are_inactive(r, k):
    """An exact tie never counts as an opportunity."""
    from fourfx.market import arbitrage

    op = arbitrage(k)
    # force the direct rate onto the indirect route value
    logs_ = list(r.log_rates)
    combo = sum(v * x for v, x in zip(op.combo, logs_))
    logs_[op.pair] = combo
    tied = RateEnsemble.from_log_rates(logs_)
    assert not activation(tied, k)


@given(balanced_ensembles)
def test_balanced_iff_zero_discrepancies(r):
    assert is_balanced(r, tol=1e-9)
    assert discrepancies(r).is_zero(1e-9)
