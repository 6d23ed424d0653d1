import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from fourfx import linalg, reference, semigroup
from fourfx.market import Chain, GeneratorBasis, RateEnsemble, make_perturbed
from fourfx.semigroup import (
    DivergentOrbit,
    PeriodicOrbit,
    classify_periodic_chain,
    component_reachability,
    component_transitions,
    connected_components,
    discrepancy_transition_table,
    enumerate_products,
    matrix_rank,
    orbit_polyhedron,
    reachable_discrepancies,
    single_step_orbit,
    vertex_incidence,
)
from fourfx.synthesis import make_case_b, star_chain


def test_closure_size_and_ranks():
    elements = enumerate_products()
    assert len(elements) == 229
    hist = Counter(e.rank for e in elements)
    assert hist == {2: 144, 1: 84, 0: 1}
    assert any(e.matrix == ((0, 0, 0),) * 3 for e in elements)


def test_component_partition():
    comp = connected_components()
    sizes = Counter(comp.values())
    assert sizes == {**{i: 24 for i in range(1, 7)}, **{i: 12 for i in range(7, 14)}, 14: 1}
    gens = linalg.generator_matrices()
    for i in range(1, 7):
        assert comp[gens[2 * i - 2]] == i
        assert comp[gens[2 * i - 1]] == i
    for offset, rep in enumerate(reference.REF_RANK1_REPRESENTATIVES):
        assert comp[rep] == 7 + offset
        assert matrix_rank(rep) == 1


def test_component_transitions_and_reachability():
    trans = component_transitions()
    for i in range(1, 7):
        assert sorted(trans[i]) == list(reference.REF_COMPONENT_TRANSITIONS[i])
    for i in range(7, 14):
        assert trans[i] == frozenset({14})
    reach = component_reachability()
    for i in range(1, 14):
        assert 14 in reach[i]
    for i in range(1, 7):
        assert sorted(reach[i] - {14}) == list(reference.REF_COMPONENT_TRANSITIONS[i])


def test_projector_powers():
    for e in enumerate_products():
        m1 = e.matrix
        m2 = linalg.mat_mul(m1, m1)
        m3 = linalg.mat_mul(m2, m1)
        assert m2 == m1 or linalg.mat_mul(m2, m2) == m2 or linalg.mat_mul(m3, m3) == m3


def test_transition_table_against_reference():
    table = discrepancy_transition_table()
    diffs = {
        (i + 1, j + 1): (reference.REF_TRANSITION_TABLE[i][j], table[i][j])
        for i in range(12)
        for j in range(12)
        if table[i][j] != reference.REF_TRANSITION_TABLE[i][j]
    }
    assert diffs == reference.REF_TRANSITION_TABLE_TYPOS
    # spot values stated with the table
    assert table[0][1] == 12          # first operator sends vertex 2 to vertex 12
    assert table[0][3] == 0           # and vertex 4 to the balanced vertex
    assert all(row_zero == 0 for row_zero in (0,))
    with pytest.raises(ValueError):
        discrepancy_transition_table(0.0)


def test_zero_vertex_is_absorbing():
    gens = linalg.generator_matrices()
    for g in gens:
        assert linalg.vec_mat((0, 0, 0), g) == (0, 0, 0)


def test_vertex_incidence_bit_exact():
    orbit = single_step_orbit(math.log(2))
    inc = vertex_incidence(orbit)
    assert inc == reference.REF_VERTEX_INCIDENCE
    assert inc[0] == (1, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1)
    assert all(inc[i][j] == inc[j][i] for i in range(12) for j in range(12))


def test_orbit_families_and_counts():
    assert len(orbit_polyhedron(1.0, 0.37).vertices) == 24
    assert orbit_polyhedron(1.0, 0.37).family == "generic"
    assert len(orbit_polyhedron(1.0, -1.0).vertices) == 12
    assert orbit_polyhedron(1.0, -1.0).family == "tetra"
    assert len(orbit_polyhedron(1.0, 0.0).vertices) == 12
    assert orbit_polyhedron(1.0, 0.0).family == "single"
    assert orbit_polyhedron(3.0, 6.0, ratio=Fraction(2)).family == "tetra"
    assert orbit_polyhedron(3.0, 1.5, ratio=Fraction(1, 2)).family == "tetra"
    with pytest.raises(ValueError):
        orbit_polyhedron(0.0, 0.0)


def test_orbit_edges_verified_by_application():
    orbit = single_step_orbit(math.log(2))
    gens = linalg.generator_matrices()
    by_id = {v.vid: v for v in orbit.vertices}
    for e in orbit.edges:
        src = by_id[e.source]
        triple = tuple(p[0] for p in src.pairs)
        image = linalg.vec_mat(triple, gens[e.strong - 1])
        want = (0, 0, 0) if e.target == 0 else tuple(
            p[0] for p in by_id[e.target].pairs
        )
        assert image == want


def test_reachable_discrepancy_bound():
    local = random.Random(11)
    for _ in range(10):
        d = tuple(local.uniform(-3, 3) for _ in range(3))
        assert len(reachable_discrepancies(d)) < 231


def test_image_union_of_step_sets():
    gens = linalg.generator_matrices()

    def pair_set(x, y):
        return {
            tuple((ca * x[0] + cb * y[0], ca * x[1] + cb * y[1]) for ca, cb in f)
            for f in reference.REF_D24
        }

    lhs = set()
    for f in reference.REF_D24:
        for g in gens:
            lhs.add(semigroup._pair_mul(f, g))
    rhs = (
        pair_set((1, 0), (0, 1))
        | pair_set((1, 0), (1, 0))
        | pair_set((0, 1), (0, 1))
        | pair_set((1, -1), (1, -1))
    )
    assert lhs == rhs


def test_classify_star_periodic_24():
    basis = GeneratorBasis.single(2.0)
    res = classify_periodic_chain(star_chain(), make_perturbed(basis, 1))
    assert isinstance(res, PeriodicOrbit) and res.period == 24


def test_classify_fixed_point_period_1():
    basis = GeneratorBasis.single(2.0)
    balanced = RateEnsemble.lattice(basis, [[0]] * 6)
    res = classify_periodic_chain(Chain(items=(5,), period=1), balanced)
    assert isinstance(res, PeriodicOrbit) and res.period == 1


def test_no_divergent_two_periodic_chain_exists():
    # exhaustive: every two-element periodic chain settles into a cycle, for
    # all six one-step starts and a generic two-step start
    basis = GeneratorBasis.single(2.0)
    starts = [make_perturbed(basis, w) for w in range(1, 7)]
    starts.append(make_case_b(GeneratorBasis(names=("a", "b"), values=(1.0, math.sqrt(2.0)))))
    divergent = 0
    for start in starts:
        for k1 in range(1, 25):
            for k2 in range(1, 25):
                res = classify_periodic_chain(Chain(items=(k1, k2), period=2), start)
                if isinstance(res, DivergentOrbit):
                    divergent += 1
    assert divergent == 0


def test_divergent_chain_from_knot_cycle():
    # riding a cargo-bearing knot cycle forever pumps the dollar rates; the
    # word is the cycle K1->K2->K3->K4->K1 resolved to active members
    basis = GeneratorBasis(names=("a", "b"), values=(1.0, math.sqrt(2.0)))
    start = make_case_b(basis)
    word = (3, 10, 21, 6, 24, 15, 2, 20)
    chain = Chain(items=word, period=8)
    res = classify_periodic_chain(chain, start)
    assert isinstance(res, DivergentOrbit)
    assert res.period == 8
    assert any(abs(f - 1.0) > 1e-6 for f in res.factors)
    # per-period factors are exp of the cycle cargo (a, a, a-b)
    a, b = 1.0, math.sqrt(2.0)
    assert res.factors[0] == pytest.approx(math.exp(a))
    assert res.factors[2] == pytest.approx(math.exp(a - b))
    # linear growth of the log rates
    from fourfx.market import apply_chain

    traj = apply_chain(start, chain, steps=8 * 60)
    l1 = [t.log_rates[0] for t in traj]
    assert abs(l1[8 * 50] - l1[8 * 40]) > 1.0


def test_matrix_rank_exact():
    assert matrix_rank(((0, 0, 0),) * 3) == 0
    assert matrix_rank(((1, 0, 0), (0, 1, 0), (0, 0, 1))) == 3
    assert matrix_rank(((1, 1, 0), (2, 2, 0), (0, 0, 0))) == 1
    assert matrix_rank(((1, 0, 0), (0, 1, 0), (1, 1, 0))) == 2
