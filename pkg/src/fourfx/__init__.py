"""Four-currency arbitrage dynamics.

A market of four currencies carries six principal exchange rates and 24
conditional arbitrage operators.  This package implements the operators and
their matrix linearization, enumerates the finite semigroup driving the
discrepancy dynamics, synthesizes operator chains to arbitrary balanced
targets, classifies the reachable sets, and serves the interactive Arbiter
console over a loopback JSON API.
"""

from .market import (
    ARBITRAGES,
    Chain,
    Currency,
    DiscrepancyTriple,
    GeneratorBasis,
    PAIRS,
    RateEnsemble,
    STRONG_ARBITRAGES,
    activation,
    active_flags,
    apply_arbitrage,
    apply_chain,
    apply_strong,
    balance_three,
    discrepancies,
    is_balanced,
    make_perturbed,
    reciprocal_rate,
)
from .linalg import b_matrix, decompose_d, g_matrix, h_matrix, increment, q_matrices, vector_v
from .semigroup import (
    DiscrepancyOrbit,
    DivergentOrbit,
    PeriodicOrbit,
    classify_periodic_chain,
    component_reachability,
    component_transitions,
    connected_components,
    discrepancy_transition_table,
    enumerate_products,
    orbit_polyhedron,
    single_step_orbit,
    vertex_incidence,
)
from .synthesis import (
    LatticeSpec,
    SynthesisResult,
    approximate_target,
    basic_chain,
    bfs_chain,
    check_exponent_bounds,
    cycle_cargo,
    knot_structure,
    length_bound,
    make_case_b,
    reach_exponents,
    reachability_classification,
    star_chain,
    travel_graph,
    variant_chain,
)
from .verify import VerificationReport, run_suite


def incidence_matrix(graph):
    """Incidence matrix of an orbit graph or of the knot travel graph."""
    from .semigroup import DiscrepancyOrbit, vertex_incidence
    from .synthesis import TravelGraph, knot_incidence

    if isinstance(graph, DiscrepancyOrbit):
        return vertex_incidence(graph)
    if isinstance(graph, TravelGraph):
        return knot_incidence(graph)
    raise TypeError(f"no incidence matrix for {type(graph).__name__}")


__version__ = "0.1.0"
