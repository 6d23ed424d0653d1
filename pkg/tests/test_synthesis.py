import math
import random
from fractions import Fraction

import pytest

from fourfx import reference, synthesis as sy
from fourfx.market import (
    Chain,
    GeneratorBasis,
    RateEnsemble,
    activation,
    apply_chain,
    discrepancies,
    is_balanced,
    make_perturbed,
)

A = 1.0
B = math.sqrt(2.0)


@pytest.fixture(scope="module")
def basis():
    return GeneratorBasis.single(2.0)


@pytest.fixture(scope="module")
def r1(basis):
    return make_perturbed(basis, 1)


@pytest.fixture(scope="module")
def graph():
    return sy.travel_graph(A, B)


@pytest.fixture(scope="module")
def case_b():
    return sy.make_case_b(GeneratorBasis(names=("a", "b"), values=(A, B)))


def end_exponents(start, chain):
    end = apply_chain(start, chain)[-1]
    return tuple(row[0] for row in end.coeffs)


# -- search chains -----------------------------------------------------------

def test_bfs_examples(r1):
    assert sy.bfs_chain(r1, (0, 0, 0), 10).items == (7,)
    two = sy.bfs_chain(r1, (1, 0, 0), 10)
    assert len(two.items) == 2
    assert end_exponents(r1, two) == (1, 0, 0, -1, -1, 0)
    same = sy.bfs_chain(
        RateEnsemble.lattice(r1.basis, [[1], [0], [0], [0], [0], [0]]), (1, 0, 0), 10
    )
    # target equal to a balanced start would be empty, but this start is not
    assert len(same.items) == 2
    with pytest.raises(sy.NotFound):
        sy.bfs_chain(r1, (9, 9, 9), 3)


def test_bfs_empty_chain_for_current_state(basis):
    balanced = RateEnsemble.lattice(basis, [[2], [1], [0], [-1], [-2], [-1]])
    assert is_balanced(balanced)
    assert sy.bfs_chain(balanced, (2, 1, 0), 5).items == ()


def test_basic_chain_formula_hit(basis, r1):
    res = sy.basic_chain((1, 0, 1), basis)
    assert res.method == "formula" and not res.deviation
    assert end_exponents(r1, res.chain) == (1, 0, 1, -1, 0, 1)
    assert len(res.chain.items) <= res.bound


def test_basic_chain_formula_miss_falls_back(basis, r1):
    res = sy.basic_chain((1, 0, 0), basis)
    assert res.method == "bfs" and res.deviation
    assert res.formula_end is not None and res.formula_end[:3] == (1, 0, 1)
    assert len(res.chain.items) == 2 <= res.bound
    assert end_exponents(r1, res.chain) == (1, 0, 0, -1, -1, 0)


def test_basic_chain_origin_short_solution(basis):
    res = sy.basic_chain((0, 0, 0), basis)
    assert res.chain.items == (7,)
    assert res.bound == 3 * 1 + 3


def test_variant_chains(basis):
    res4 = sy.variant_chain(4, (0, 0, 0), basis)
    assert len(res4.chain.items) <= 4
    assert end_exponents(make_perturbed(basis, 4), res4.chain) == (0,) * 6
    res2 = sy.variant_chain(2, (0, 1, 0), basis)
    assert len(res2.chain.items) <= 3
    res5 = sy.variant_chain(5, (0, 0, 0), basis)
    assert end_exponents(make_perturbed(basis, 5), res5.chain) == (0,) * 6
    with pytest.raises(ValueError):
        sy.variant_chain(1, (0, 0, 0), basis)


def test_variant_blocked_symbol_uses_search(basis):
    # negative second exponent with start 2 hits the impossible symbol 34
    res = sy.variant_chain(2, (0, -1, 0), basis)
    assert res.method == "bfs" and res.formula_chain is None
    assert end_exponents(make_perturbed(basis, 2), res.chain) == (0, -1, 0, -1, 0, 1)


def test_length_bounds():
    assert sy.length_bound(1, (0, 0, 0)) == 6
    assert sy.length_bound(1, (1, 0, 0)) == 3
    assert sy.length_bound(2, (0, 1, 0)) == 3
    assert sy.length_bound(4, (0, 0, 0)) == 4
    assert sy.length_bound(6, (1, 1, 1)) == 13


# -- the periodic chain ------------------------------------------------------

def test_star_chain_reconstruction(r1):
    star = sy.star_chain()
    assert star.period == 24
    assert star.items[:4] == (15, 10, 3, 21)
    assert sorted(star.items) == list(range(1, 25))
    traj = apply_chain(r1, star, steps=48)
    assert traj[24] == traj[0] and traj[48] == traj[0]
    assert all(activation(traj[i], star.items[i % 24]) for i in range(24))
    # discrepancy route, step 1: the strong operator pairing row 15 zeroes d1
    assert discrepancies(traj[1]).coeffs == ((0,), (1,), (0,))


def test_star_route_matches_reference(r1):
    star = sy.star_chain()
    traj = apply_chain(r1, star, steps=24)
    route = []
    for state in traj:
        d = discrepancies(state)
        from fourfx.semigroup import vertex_label_single

        route.append(vertex_label_single(tuple(r[0] for r in d.coeffs)))
    assert tuple(route) == reference.REF_STAR_ROUTE


def test_star_differs_from_reference_list_at_nine_positions():
    star = sy.star_chain()
    diff = [i for i in range(24) if star.items[i] != reference.REF_STAR_CHAIN[i]]
    assert len(diff) == 9
    missing = set(range(1, 25)) - set(reference.REF_STAR_CHAIN)
    assert missing == {2, 20}


# -- bounds ------------------------------------------------------------------

def test_check_exponent_bounds(basis, r1):
    report = sy.check_exponent_bounds([r1], chain_length=0)
    assert report.ok
    traj = apply_chain(r1, sy.star_chain(), steps=48)
    report = sy.check_exponent_bounds(traj)
    assert report.ok and report.states_checked == 49
    # a balanced reachable state has zero discrepancy coefficients
    res = sy.basic_chain((1, 0, 0), basis)
    end = apply_chain(r1, res.chain)[-1]
    assert discrepancies(end).coeffs == ((0,), (0,), (0,))


# -- knot machinery ----------------------------------------------------------

def test_knot_structure_values():
    knots = sy.knot_structure(A, B)
    assert knots[0].commuter == ((1, 0), (0, 1), (-1, 1))          # (a, b, -a+b)
    assert knots[0].terminals[2] == ((1, 0), (0, 1), (0, 0))       # (a, b, 0)
    assert knots[1].terminals[0] == ((0, 0), (0, 1), (1, 0))       # (0, b, a)
    # degenerate parameters are rejected
    with pytest.raises(sy.DegenerateCaseError):
        sy.knot_structure(1.0, 1.0)
    with pytest.raises(sy.DegenerateCaseError):
        sy.knot_structure(1.0, 2.0, ratio=Fraction(2))


def test_commuter_terminal_moves():
    from fourfx.linalg import g_matrix

    knots = sy.knot_structure(A, B)
    c2 = knots[1].commuter
    assert sy._triple_mul(c2, g_matrix(7)) == knots[1].terminals[0]
    # the paired return works; the unpaired one does not
    t12 = knots[1].terminals[0]
    assert sy._triple_mul(t12, g_matrix(8)) == c2
    assert sy._triple_mul(t12, g_matrix(10)) != c2


def test_travel_graph_shape(graph):
    assert len(graph.edges) == 36
    inc = sy.knot_incidence(graph)
    for row in (0, 2, 4):
        assert inc[row] == (0, 1, 0, 1, 0, 1)
    for row in (1, 3, 5):
        assert inc[row] == (1, 0, 1, 0, 1, 0)
    (edge,) = [
        e for e in graph.edges
        if (e.src_knot, e.src_terminal, e.strong) == (1, 3, 3)
    ]
    assert (edge.dst_knot, edge.dst_terminal) == (2, 1)
    assert edge.cargo == ((0, 0), (1, 0), (0, 0))      # (0, a, 0)
    (e16,) = [
        e for e in graph.edges
        if (e.src_knot, e.src_terminal, e.strong) == (6, 1, 2)
    ]
    assert (e16.dst_knot, e16.dst_terminal) == (1, 2)
    assert e16.cargo == ((1, 0), (0, 0), (0, 0))


def test_cycle_cargoes(graph):
    assert sy.cycle_cargo(graph, (1, 2, 3, 6, 1)) == ((1, 0), (1, 1), (1, 0))
    assert sy.cycle_cargo(graph, (1, 2, 3, 4, 1)) == ((1, 0), (1, 0), (1, -1))
    # the first canonical cycle cannot shed its third component
    got = sy.cycle_cargo(graph, (1, 2, 5, 6, 1))
    assert got == ((1, -1), (1, 0), (1, 0))
    with pytest.raises(sy.InvalidCycleError):
        sy.cycle_cargo(graph, (1, 3, 1))
    with pytest.raises(sy.InvalidCycleError):
        sy.cycle_cargo(graph, (1, 2, 3))


def test_cycle_cargo_additivity(graph):
    c1 = sy.cycle_cargo(graph, (1, 2, 3, 6, 1))
    c2 = sy.cycle_cargo(graph, (1, 2, 3, 4, 1))
    both = sy.cycle_cargo(graph, (1, 2, 3, 6, 1, 2, 3, 4, 1))
    assert both == sy._triple_add(c1, c2)


# -- reachability ------------------------------------------------------------

def test_reach_exponents_balancing_only(case_b):
    chain = sy.reach_exponents(case_b, (0, 0, 0), (0, 0, 0))
    end = apply_chain(case_b, chain)[-1]
    assert is_balanced(end)
    assert end.coeffs == (((0, 0),) * 2 + ((0, 0),) * 4)


def test_reach_exponents_examples(case_b):
    chain = sy.reach_exponents(case_b, (1, 1, 1), (0, 0, 0))
    end = apply_chain(case_b, chain)[-1]
    assert is_balanced(end)
    assert [list(r) for r in end.coeffs[:3]] == [[1, 0], [1, 0], [1, 0]]

    chain = sy.reach_exponents(case_b, (4, 4, 4), (1, 1, 1))
    end = apply_chain(case_b, chain)[-1]
    assert is_balanced(end)
    assert [list(r) for r in end.coeffs[:3]] == [[4, -1], [4, 1], [4, -1]]


def test_reach_exponents_negative_a_parts(case_b):
    chain = sy.reach_exponents(case_b, (-2, 3, 0), (2, 0, 1))
    end = apply_chain(case_b, chain)[-1]
    assert is_balanced(end)
    assert [list(r) for r in end.coeffs[:3]] == [[-2, -2], [3, 0], [0, -1]]
    with pytest.raises(ValueError):
        sy.reach_exponents(case_b, (0, 0, 0), (-1, 0, 0))


def test_reach_exponents_wrong_case(r1):
    with pytest.raises(sy.WrongCaseError):
        sy.reach_exponents(r1, (0, 0, 0), (0, 0, 0))


def test_approximate_target_examples(case_b):
    # offset 0.3 on the first dollar rate alone (balanced target)
    target = RateEnsemble.from_log_rates((0.3, 0.0, 0.0, -0.3, -0.3, 0.0))
    chain = sy.approximate_target(case_b, target, eps=1e-3, budget=10**4)
    end = apply_chain(case_b, chain)[-1]
    assert max(abs(x - y) for x, y in zip(end.log_rates, target.log_rates)) <= 1e-3
    assert is_balanced(end, tol=1e-9)


def test_approximate_target_shrinking_eps(case_b):
    target = RateEnsemble.from_log_rates((0.3, -0.1, 0.2, -0.4, -0.1, 0.3))
    for eps in (1e-1, 1e-2, 1e-3):
        chain = sy.approximate_target(case_b, target, eps=eps, budget=10**4)
        end = apply_chain(case_b, chain)[-1]
        assert max(abs(x - y) for x, y in zip(end.log_rates, target.log_rates)) <= eps


def test_approximate_target_requires_irrational(case_b):
    rational = sy.make_case_b(
        GeneratorBasis(names=("a", "b"), values=(1.0, 1.5), relation=Fraction(3, 2))
    )
    target = RateEnsemble.from_log_rates((0.0,) * 6)
    with pytest.raises(sy.WrongCaseError):
        sy.approximate_target(rational, target, eps=1e-3, budget=100)


# -- classification ----------------------------------------------------------

def test_classification_empty_and_case_a():
    assert sy.reachability_classification((0.0, 0.0, 0.0)).tag == "empty"
    spec = sy.reachability_classification((0.7, 0.0, 0.0))
    assert spec.tag == "lattice" and spec.steps == (0.7,)


def test_classification_case_b():
    dense = sy.reachability_classification((1.0, math.sqrt(2.0), 0.0), q1=None)
    assert dense.tag == "dense"
    lat = sy.reachability_classification((3.0, 2.0, 0.0), q1=Fraction(2, 3))
    assert lat.tag == "lattice"
    assert lat.gamma == pytest.approx(1.0)
    zero_first = sy.reachability_classification((0.0, 2.0, 3.0), q32=Fraction(3, 2))
    assert zero_first.gamma == pytest.approx(1.0)


def test_classification_case_c():
    spec = sy.reachability_classification(
        (595.0, 1683.0, 308.0), q1=Fraction(1683, 595), q2=Fraction(308, 595)
    )
    assert spec.tag == "lattice"
    assert spec.multipliers == (17, 7, 11, 4, 3, 5)
    assert spec.gamma == pytest.approx(1.0)
    assert spec.steps == tuple(pytest.approx(k) for k in (17, 7, 11, 4, 3, 5))

    single = sy.reachability_classification(
        (6.0, 3.0, 2.0), q1=Fraction(1, 2), q2=Fraction(1, 3)
    )
    assert single.multipliers == (1,)
    assert single.gamma == pytest.approx(1.0)

    dense = sy.reachability_classification((1.0, 2.0, math.pi), q1=Fraction(2), q2=None)
    assert dense.tag == "dense"


def test_classification_declaration_mismatch():
    with pytest.raises(ValueError):
        sy.reachability_classification((1.0, 2.0, 3.0), q1=Fraction(1, 2), q2=Fraction(3))
