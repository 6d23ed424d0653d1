"""Constructive chain building and reachability.

Single-step starts (one balanced rate multiplied by a step) admit a fully
table-driven abstraction: the reachable lattice states are determined by the
three leading exponents plus one of thirteen discrepancy vertices, so
breadth-first search over that abstraction yields certified minimal chains.
The published closed-form chain words are kept verbatim, executed, and
replaced by a search chain whenever they miss their stated target.

Two-step starts (the one-zero-discrepancy case) use the knot machinery:
commuters, terminals, and the cargo-bearing travel graph between knots,
which composes into chains that shift the dollar rates by arbitrary integer
combinations of the two steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .linalg import h_matrix, vec_mat
from .market import (
    Chain,
    GeneratorBasis,
    RateEnsemble,
    apply_chain,
    discrepancies,
    is_balanced,
    make_perturbed,
    strong_arbitrage,
)
from .reference import (
    REF_AUX2_BLOCKS_MINUS,
    REF_AUX2_BLOCKS_PLUS,
    REF_AUX_BLOCKS_MINUS,
    REF_AUX_BLOCKS_PLUS,
    REF_BASIC_BLOCKS_MINUS,
    REF_BASIC_BLOCKS_PLUS,
    REF_COMMUTERS,
    REF_STAR_ROUTE,
    REF_TERMINALS,
)
from .semigroup import (
    VERTICES_SINGLE,
    VerificationFailure,
    gap_d_coeffs,
    vertex_label_single,
)

BFS_STATE_CAP = 10**7

Triple = tuple[int, int, int]
Pair = tuple[int, int]
PairTriple = tuple[Pair, Pair, Pair]


class NotFound(Exception):
    """No chain within the allowed length or budget."""


class WrongCaseError(Exception):
    """The start ensemble is not in the case this operation handles."""


class DegenerateCaseError(Exception):
    """Step parameters collapse the generic structure; use the single-step path."""


# ---------------------------------------------------------------------------
# table-driven single-step dynamics on (exponents, vertex label)

@lru_cache(maxsize=None)
def _step_tables(sign_a: int) -> tuple[tuple[tuple[int, Triple, int | None], ...], ...]:
    """[label][strong-1] -> (next label, exponent increment, member arbitrage).

    Labels are 0 (balanced) and 1..12; increments are in step units; the
    member is None exactly when the operator is a no-op at that vertex.
    """
    from .linalg import g_matrix

    rows: list[tuple[tuple[int, Triple, int | None], ...]] = []
    rows.append(tuple((0, (0, 0, 0), None) for _ in range(12)))
    for vertex in VERTICES_SINGLE:
        entries = []
        for i in range(1, 13):
            image = vec_mat(vertex, g_matrix(i))
            label = vertex_label_single(image)
            if label is None:
                raise VerificationFailure("single-step vertex set not closed")
            dn = tuple(vec_mat(vertex, h_matrix(i)))
            gap = sum(c * d for c, d in zip(gap_d_coeffs(i), vertex)) * sign_a
            op = strong_arbitrage(i)
            member = op.member_pos if gap > 0 else op.member_neg if gap < 0 else None
            entries.append((label, dn, member))
        rows.append(tuple(entries))
    return tuple(rows)


def _single_gen_state(ensemble: RateEnsemble) -> tuple[Triple, int, int]:
    """(leading exponents, vertex label, sign of the step) of a one-generator
    lattice ensemble whose discrepancies lie in the single-step vertex set."""
    if ensemble.mode != "lattice" or len(ensemble.basis.values) != 1:
        raise WrongCaseError("single-generator lattice ensemble required")
    d = discrepancies(ensemble)
    label = vertex_label_single(tuple(row[0] for row in d.coeffs))
    if label is None:
        raise WrongCaseError("discrepancies outside the single-step vertex set")
    exps = tuple(ensemble.coeffs[j][0] for j in range(3))
    sign_a = 1 if ensemble.basis.values[0] > 0 else -1
    return exps, label, sign_a


def balanced_exponents(n: Triple) -> tuple[int, ...]:
    """The balanced six-exponent vector with leading exponents n."""
    n1, n2, n3 = n
    return (n1, n2, n3, n2 - n1, n3 - n1, n3 - n2)


@dataclass(frozen=True)
class SynthesisResult:
    chain: Chain
    method: str                 # "formula" or "bfs"
    deviation: bool
    bound: int
    start: int
    target: Triple
    formula_chain: Chain | None = None
    formula_end: tuple[int, ...] | None = None


def _bfs_strongs(
    start: tuple[Triple, int],
    target: tuple[Triple, int],
    sign_a: int,
    max_len: int,
) -> list[tuple[int, int | None]] | None:
    """Minimal strong-operator path in (exponents, label) space.

    Returns [(strong, member), ...] or None; raises on the state cap.
    """
    if start == target:
        return []
    tables = _step_tables(sign_a)
    parents: dict[tuple[Triple, int], tuple[tuple[Triple, int], int, int | None] | None] = {
        start: None
    }
    frontier = [start]
    for _ in range(max_len):
        nxt_frontier = []
        for state in frontier:
            (n, label) = state
            row = tables[label]
            for i in range(12):
                nxt_label, dn, member = row[i]
                nxt = (
                    (n[0] + dn[0], n[1] + dn[1], n[2] + dn[2]),
                    nxt_label,
                )
                if nxt == state or nxt in parents:
                    continue
                parents[nxt] = (state, i + 1, member)
                if nxt == target:
                    path = []
                    cur = nxt
                    while parents[cur] is not None:
                        prev, strong, memb = parents[cur]
                        path.append((strong, memb))
                        cur = prev
                    path.reverse()
                    return path
                nxt_frontier.append(nxt)
        if len(parents) > BFS_STATE_CAP:
            raise MemoryError("state space exceeded the search cap")
        frontier = nxt_frontier
        if not frontier:
            return None
    return None


def bfs_chain(start: RateEnsemble, n: Triple, max_len: int) -> Chain:
    """Certified minimal chain from a single-step start to the balanced
    lattice target with leading exponents n; raises NotFound past max_len."""
    if max_len < 1:
        raise ValueError("max_len must be positive")
    exps, label, sign_a = _single_gen_state(start)
    path = _bfs_strongs((exps, label), (tuple(n), 0), sign_a, max_len)
    if path is None:
        raise NotFound(f"no chain of length <= {max_len} reaches {n}")
    items = []
    for strong, member in path:
        if member is None:
            raise VerificationFailure("no-op edge on a shortest path")
        items.append(member)
    return Chain(items=tuple(items))


def _verify_chain(start: RateEnsemble, chain: Chain, n: Triple) -> bool:
    end = apply_chain(start, chain)[-1]
    want = balanced_exponents(n)
    return tuple(row[0] for row in end.coeffs) == want


def bfs_grid(start: RateEnsemble, targets: Sequence[Triple], max_len: int) -> dict[Triple, Chain]:
    """Minimal chains to many balanced targets from one start, via a single
    breadth-first pass with parent reconstruction."""
    exps, label, sign_a = _single_gen_state(start)
    tables = _step_tables(sign_a)
    wanted = {(tuple(t), 0): tuple(t) for t in targets}
    found: dict[Triple, Chain] = {}
    start_state = (exps, label)
    if start_state in wanted:
        found[wanted[start_state]] = Chain(items=())
    parents: dict[tuple[Triple, int], tuple[tuple[Triple, int], int] | None] = {
        start_state: None
    }
    frontier = [start_state]
    depth = 0
    while frontier and len(found) < len(wanted) and depth < max_len:
        depth += 1
        nxt_frontier = []
        for state in frontier:
            n, lab = state
            row = tables[lab]
            for i in range(12):
                nxt_label, dn, member = row[i]
                nxt = ((n[0] + dn[0], n[1] + dn[1], n[2] + dn[2]), nxt_label)
                if nxt == state or nxt in parents:
                    continue
                parents[nxt] = (state, member)
                if nxt in wanted and wanted[nxt] not in found:
                    items = []
                    cur = nxt
                    while parents[cur] is not None:
                        prev, memb = parents[cur]
                        items.append(memb)
                        cur = prev
                    items.reverse()
                    found[wanted[nxt]] = Chain(items=tuple(items))
                nxt_frontier.append(nxt)
        if len(parents) > BFS_STATE_CAP:
            raise MemoryError("state space exceeded the search cap")
        frontier = nxt_frontier
    return found


# ---------------------------------------------------------------------------
# published chain formulas, executed and certified

def _sigma(v: int) -> str:
    return "+" if v >= 0 else "-"


def _block_word(blocks_plus, blocks_minus, idx: int, count: int, sign: str) -> list[int]:
    block = blocks_plus[idx] if sign == "+" else blocks_minus[idx]
    if any(k > 24 for k in block):
        raise NotFound("block contains an impossible operator symbol")
    return list(block) * count


def formula_chain_word(n: Triple) -> list[int]:
    """The closed-form chain word for a first-rate start, verbatim."""
    n1, n2, n3 = n
    word: list[int] = []
    word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 3, abs(n3), _sigma(n3))
    word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 2, abs(n2), _sigma(n2))
    word += [15, 18]
    word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 1, abs(n1 - 1), _sigma(n1))
    word += [5]
    return word


def variant_chain_word(start: int, n: Triple) -> list[int]:
    """The closed-form chain words for starts 2..6, verbatim."""
    n1, n2, n3 = n
    if start == 2:
        word = _block_word(REF_AUX_BLOCKS_PLUS, REF_AUX_BLOCKS_MINUS, 1, abs(n1), _sigma(n1))
        word += [24, 12]
        word += _block_word(REF_AUX_BLOCKS_PLUS, REF_AUX_BLOCKS_MINUS, 3, abs(n3), _sigma(n3))
        word += _block_word(REF_AUX_BLOCKS_PLUS, REF_AUX_BLOCKS_MINUS, 2, abs(n2 - 1), _sigma(n2))
        word += [1]
        return word
    if start == 3:
        word = _block_word(REF_AUX2_BLOCKS_PLUS, REF_AUX2_BLOCKS_MINUS, 2, abs(n2), _sigma(n2))
        word += _block_word(REF_AUX2_BLOCKS_PLUS, REF_AUX2_BLOCKS_MINUS, 1, abs(n1), _sigma(n1))
        word += [12, 10]
        word += _block_word(REF_AUX2_BLOCKS_PLUS, REF_AUX2_BLOCKS_MINUS, 3, abs(n3 - 1), _sigma(n3))
        word += [3]
        return word
    if start == 4:
        word = [12]
        word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 3, abs(n3), _sigma(n3))
        word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 2, abs(n2), _sigma(n2))
        word += [15, 18]
        word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 1, abs(n1), _sigma(n1))
        word += [5]
        return word
    if start == 5:
        word = [16]
        word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 3, abs(n3), _sigma(n3))
        word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 2, abs(n2), _sigma(n2))
        word += [15, 18]
        word += _block_word(REF_BASIC_BLOCKS_PLUS, REF_BASIC_BLOCKS_MINUS, 1, abs(n1), _sigma(n1))
        word += [3]
        return word
    if start == 6:
        word = [10]
        word += _block_word(REF_AUX_BLOCKS_PLUS, REF_AUX_BLOCKS_MINUS, 1, abs(n1), _sigma(n1))
        word += [24, 12]
        word += _block_word(REF_AUX_BLOCKS_PLUS, REF_AUX_BLOCKS_MINUS, 3, abs(n3), _sigma(n3))
        word += _block_word(REF_AUX_BLOCKS_PLUS, REF_AUX_BLOCKS_MINUS, 2, abs(n2 - 1), _sigma(n2))
        word += [1]
        return word
    raise ValueError("variant start must be 2..6")


def length_bound(start: int, n: Triple) -> int:
    """Published chain-length bound for the given start ensemble."""
    n1, n2, n3 = n
    if start == 1:
        return 3 * (abs(n1 - 1) + abs(n2) + abs(n3)) + 3
    if start == 2:
        return 3 * (abs(n1) + abs(n2 - 1) + abs(n3)) + 3
    if start == 3:
        return 3 * (abs(n1) + abs(n2) + abs(n3 - 1)) + 3
    if start in (4, 5, 6):
        return 3 * (abs(n1) + abs(n2) + abs(n3)) + 4
    raise ValueError("start must be 1..6")


def _synthesize(start: int, n: Triple, basis: GeneratorBasis) -> SynthesisResult:
    n = tuple(n)
    r0 = make_perturbed(basis, start)
    bound = length_bound(start, n)
    formula: Chain | None = None
    formula_end: tuple[int, ...] | None = None
    try:
        word = formula_chain_word(n) if start == 1 else variant_chain_word(start, n)
        formula = Chain(items=tuple(word))
    except NotFound:
        formula = None
    if formula is not None:
        end = apply_chain(r0, formula)[-1]
        formula_end = tuple(row[0] for row in end.coeffs)
        if formula_end == balanced_exponents(n):
            return SynthesisResult(
                chain=formula, method="formula", deviation=False,
                bound=bound, start=start, target=n,
            )
    found = bfs_chain(r0, n, max_len=bound)
    return SynthesisResult(
        chain=found, method="bfs", deviation=True,
        bound=bound, start=start, target=n,
        formula_chain=formula, formula_end=formula_end,
    )


def basic_chain(n: Triple, basis: GeneratorBasis | None = None) -> SynthesisResult:
    """Chain from the first-rate start to the balanced target with leading
    exponents n: the closed-form word when it verifies, else a certified
    search chain flagged as a formula deviation."""
    return _synthesize(1, n, basis or GeneratorBasis.single(2.0))


def variant_chain(start: int, n: Triple, basis: GeneratorBasis | None = None) -> SynthesisResult:
    """Same contract as basic_chain for the other five start ensembles."""
    if not 2 <= start <= 6:
        raise ValueError("variant start must be 2..6")
    return _synthesize(start, n, basis or GeneratorBasis.single(2.0))


# ---------------------------------------------------------------------------
# the 24-periodic chain, reconstructed from its vertex route

@lru_cache(maxsize=None)
def star_chain() -> Chain:
    """The all-active 24-periodic chain through the published vertex route.

    For each route arrow the unique strong operator realizing it is found and
    resolved to its active member at the evolving state; the result visits
    each of the 24 arbitrages exactly once and closes after 24 steps.
    """
    tables = _step_tables(1)
    exps: Triple = (1, 0, 0)
    label = 10
    if REF_STAR_ROUTE[0] != label:
        raise VerificationFailure("route does not start at the start vertex")
    items: list[int] = []
    for target_label in REF_STAR_ROUTE[1:]:
        row = tables[label]
        candidates = [
            (i + 1, row[i]) for i in range(12)
            if row[i][0] == target_label and target_label != label
        ]
        if len(candidates) != 1:
            raise VerificationFailure(
                f"route arrow {label}->{target_label} not uniquely realizable"
            )
        strong, (nxt_label, dn, member) = candidates[0]
        if member is None:
            raise VerificationFailure("route arrow is inactive")
        items.append(member)
        exps = (exps[0] + dn[0], exps[1] + dn[1], exps[2] + dn[2])
        label = nxt_label
    if (exps, label) != ((1, 0, 0), 10):
        raise VerificationFailure("route does not close on the start state")
    return Chain(items=tuple(items), period=24)


# ---------------------------------------------------------------------------
# exponent bounds along trajectories

@dataclass(frozen=True)
class BoundReport:
    states_checked: int
    chain_length: int | None
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_exponent_bounds(trajectory: Sequence[RateEnsemble], chain_length: int | None = None) -> BoundReport:
    """Per-state discrepancy bounds plus the end-state length inequality.

    Every visited state of a single-step orbit must keep each discrepancy
    within one step in absolute value; the final state of an N-step chain
    satisfies 3(|n1-1| + |n2| + |n3|) <= N + 8.
    """
    violations: list[str] = []
    for idx, state in enumerate(trajectory):
        if state.mode != "lattice" or len(state.basis.values) != 1:
            raise WrongCaseError("single-generator lattice trajectory required")
        d = discrepancies(state)
        coeffs = tuple(row[0] for row in d.coeffs)
        if any(abs(c) > 1 for c in coeffs):
            violations.append(f"state {idx}: discrepancy coefficients {coeffs}")
    if chain_length is None:
        chain_length = len(trajectory) - 1
    n1, n2, n3 = (trajectory[-1].coeffs[j][0] for j in range(3))
    if 3 * (abs(n1 - 1) + abs(n2) + abs(n3)) > chain_length + 8:
        violations.append(
            f"end state ({n1},{n2},{n3}) violates the length inequality at N={chain_length}"
        )
    return BoundReport(
        states_checked=len(trajectory),
        chain_length=chain_length,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# knots: commuters, terminals, and cargo travel (two-step case)

def _pair_add(x: Pair, y: Pair) -> Pair:
    return (x[0] + y[0], x[1] + y[1])


def _triple_add(x: PairTriple, y: PairTriple) -> PairTriple:
    return tuple(_pair_add(a, b) for a, b in zip(x, y))


def _triple_mul(t: PairTriple, m) -> PairTriple:
    return tuple(
        (
            sum(t[k][0] * m[k][j] for k in range(3)),
            sum(t[k][1] * m[k][j] for k in range(3)),
        )
        for j in range(3)
    )


@lru_cache(maxsize=None)
def corrected_commuters() -> tuple[PairTriple, ...]:
    """Commuter values consistent with the terminal lists (3 and 4 swapped
    relative to the transcription)."""
    c = list(REF_COMMUTERS)
    c[2], c[3] = c[3], c[2]
    return tuple(c)


@dataclass(frozen=True)
class Knot:
    index: int
    commuter: PairTriple
    terminals: tuple[PairTriple, PairTriple, PairTriple]


RETURN_STRONG = {1: 8, 2: 10, 3: 12}   # terminal superscript -> back to commuter
OUT_STRONG = {1: 7, 2: 9, 3: 11}       # commuter -> terminal superscript


def _check_generic(a: float, b: float, ratio: Fraction | None) -> None:
    if ratio is not None:
        bad = ratio in (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2))
        if bad or a == 0.0:
            raise DegenerateCaseError("steps are rationally degenerate; single-step case applies")
        return
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        raise DegenerateCaseError("both steps vanish")
    for x, y in ((a, 0.0), (b, 0.0), (a, b), (a, -b), (b, 2 * a), (a, 2 * b)):
        if abs(x - y) <= 1e-9 * scale:
            raise DegenerateCaseError("steps are degenerate; single-step case applies")


def knot_structure(a: float, b: float, ratio: Fraction | None = None) -> tuple[Knot, ...]:
    """The six knots of the generic two-step component, with the intra-knot
    moves verified: commuter to terminal via operators 7/9/11, terminal back
    via the paired operator 8/10/12, no cargo either way."""
    from .linalg import g_matrix

    _check_generic(a, b, ratio)
    commuters = corrected_commuters()
    knots = []
    for i in range(6):
        terms = REF_TERMINALS[i]
        c = commuters[i]
        for j in (1, 2, 3):
            if _triple_mul(c, g_matrix(OUT_STRONG[j])) != terms[j - 1]:
                raise VerificationFailure(f"knot {i+1}: commuter move to terminal {j} broke")
            if _triple_mul(c, h_matrix(OUT_STRONG[j])) != ((0, 0), (0, 0), (0, 0)):
                raise VerificationFailure(f"knot {i+1}: commuter move {j} carries cargo")
            if _triple_mul(terms[j - 1], g_matrix(RETURN_STRONG[j])) != c:
                raise VerificationFailure(f"knot {i+1}: terminal {j} return move broke")
        knots.append(Knot(index=i + 1, commuter=c, terminals=tuple(terms)))
    return tuple(knots)


@dataclass(frozen=True)
class TravelEdge:
    src_knot: int
    src_terminal: int      # superscript 1..3
    strong: int
    dst_knot: int
    dst_terminal: int
    cargo: PairTriple


@dataclass(frozen=True)
class TravelGraph:
    a: float
    b: float
    knots: tuple[Knot, ...]
    edges: tuple[TravelEdge, ...]

    def edges_between(self, src: int, dst: int) -> tuple[TravelEdge, ...]:
        return tuple(e for e in self.edges if e.src_knot == src and e.dst_knot == dst)


def travel_graph(a: float, b: float, ratio: Fraction | None = None) -> TravelGraph:
    """All cargo-bearing moves between terminals of different knots."""
    from .linalg import g_matrix

    knots = knot_structure(a, b, ratio)
    where: dict[PairTriple, tuple[int, int]] = {}
    for knot in knots:
        for j, term in enumerate(knot.terminals, start=1):
            where[term] = (knot.index, j)
    edges = []
    for knot in knots:
        for j, term in enumerate(knot.terminals, start=1):
            for i in range(1, 7):
                image = _triple_mul(term, g_matrix(i))
                if image == term or image not in where:
                    continue
                dst_knot, dst_j = where[image]
                if dst_knot == knot.index:
                    raise VerificationFailure("cargo move stayed inside a knot")
                cargo = _triple_mul(term, h_matrix(i))
                edges.append(
                    TravelEdge(
                        src_knot=knot.index, src_terminal=j, strong=i,
                        dst_knot=dst_knot, dst_terminal=dst_j, cargo=cargo,
                    )
                )
    return TravelGraph(a=a, b=b, knots=knots, edges=tuple(edges))


def knot_incidence(graph: TravelGraph) -> tuple[tuple[int, ...], ...]:
    m = [[0] * 6 for _ in range(6)]
    for e in graph.edges:
        m[e.src_knot - 1][e.dst_knot - 1] = 1
    return tuple(tuple(row) for row in m)


#: per-hop edge choice used by the canonical cycles: (src, dst) -> (terminal, strong)
CYCLE_EDGE_CHOICE: dict[tuple[int, int], tuple[int, int]] = {
    (1, 2): (3, 3),
    (2, 3): (2, 6),
    (3, 6): (1, 4),
    (6, 1): (1, 2),
    (3, 4): (1, 2),
    (4, 1): (2, 6),
    (2, 5): (1, 2),
    (5, 6): (2, 6),
}


class InvalidCycleError(Exception):
    pass


def _choose_edge(graph: TravelGraph, src: int, dst: int) -> TravelEdge:
    candidates = graph.edges_between(src, dst)
    if not candidates:
        raise InvalidCycleError(f"no travel edge K{src} -> K{dst}")
    choice = CYCLE_EDGE_CHOICE.get((src, dst))
    if choice is not None:
        for e in candidates:
            if (e.src_terminal, e.strong) == choice:
                return e
    return min(candidates, key=lambda e: (e.src_terminal, e.strong))


def cycle_cargo(graph: TravelGraph, cycle: Sequence[int]) -> PairTriple:
    """Total cargo of a closed knot walk under the documented edge choices."""
    if len(cycle) < 2 or cycle[0] != cycle[-1]:
        raise InvalidCycleError("cycle must be a closed knot walk")
    total: PairTriple = ((0, 0), (0, 0), (0, 0))
    for src, dst in zip(cycle, cycle[1:]):
        total = _triple_add(total, _choose_edge(graph, src, dst).cargo)
    return total


def _walk_word(graph: TravelGraph, walk: Sequence[int], position: tuple[int, int]) -> tuple[list[int], tuple[int, int]]:
    """Strong-operator word traversing the knot walk from a terminal position
    (knot, superscript); intra-knot repositioning moves carry no cargo."""
    word: list[int] = []
    knot, j = position
    for src, dst in zip(walk, walk[1:]):
        if src != knot:
            raise InvalidCycleError(f"walk expects K{src} but position is K{knot}")
        edge = _choose_edge(graph, src, dst)
        if j != edge.src_terminal:
            word.append(RETURN_STRONG[j])
            word.append(OUT_STRONG[edge.src_terminal])
            j = edge.src_terminal
        word.append(edge.strong)
        knot, j = edge.dst_knot, edge.dst_terminal
    return word, (knot, j)


# ---------------------------------------------------------------------------
# fast lattice executor (strong words -> arbitrage chains)

def _execute_strongs(start: RateEnsemble, strongs: Sequence[int]) -> tuple[list[int], RateEnsemble]:
    """Apply a strong word, resolving each step to its active member; no-op
    steps are dropped.  Returns the member chain and the end ensemble."""
    basis = start.basis
    if basis is None:
        raise WrongCaseError("lattice ensemble required")
    ngen = len(basis.values)
    rows = [list(r) for r in start.coeffs]
    values = basis.values
    relation = basis.relation
    members: list[int] = []
    for i in strongs:
        op = strong_arbitrage(i)
        gap = [0] * ngen
        for j in range(6):
            c = op.gap[j]
            if c:
                for g in range(ngen):
                    gap[g] += c * rows[j][g]
        if all(c == 0 for c in gap):
            continue
        if ngen == 1:
            sign = (1 if gap[0] > 0 else -1) * (1 if values[0] > 0 else -1)
        elif relation is not None:
            total = gap[0] + gap[1] * relation
            sign = 0 if total == 0 else (1 if total > 0 else -1) * (1 if values[0] > 0 else -1)
        else:
            val = sum(c * v for c, v in zip(gap, values))
            sign = 0 if abs(val) <= 1e-12 else (1 if val > 0 else -1)
        if sign == 0:
            continue
        members.append(op.member_pos if sign > 0 else op.member_neg)
        new_row = [0] * ngen
        for j in range(6):
            c = op.combo[j]
            if c:
                for g in range(ngen):
                    new_row[g] += c * rows[j][g]
        rows[op.target] = new_row
    return members, RateEnsemble.lattice(basis, rows)


# ---------------------------------------------------------------------------
# single-step pumps for large exponent adjustments

@lru_cache(maxsize=None)
def _unit_word(label: int, coord: int, direction: int, sign_a: int) -> tuple[tuple[int, ...], int]:
    """Shortest strong word from a vertex shifting one exponent by one unit,
    ending at a nonbalanced vertex; cached per (vertex, coordinate, sign)."""
    tables = _step_tables(sign_a)
    target_dn = tuple(direction if c == coord else 0 for c in range(3))
    start = (label, (0, 0, 0))
    parents: dict[tuple[int, Triple], tuple[tuple[int, Triple], int] | None] = {start: None}
    frontier = [start]
    while frontier:
        nxt_frontier = []
        for state in frontier:
            lab, dn = state
            for i in range(12):
                nxt_label, step_dn, member = tables[lab][i]
                nxt_dn = tuple(x + y for x, y in zip(dn, step_dn))
                if any(abs(x) > 2 for x in nxt_dn):
                    continue
                nxt = (nxt_label, nxt_dn)
                if nxt == state or nxt in parents:
                    continue
                parents[nxt] = (state, i + 1)
                if nxt_dn == target_dn and nxt_label != 0:
                    word = []
                    cur = nxt
                    while parents[cur] is not None:
                        prev, strong = parents[cur]
                        word.append(strong)
                        cur = prev
                    word.reverse()
                    return tuple(word), nxt_label
                if nxt_label != 0:
                    nxt_frontier.append(nxt)
        frontier = nxt_frontier
    raise VerificationFailure(f"no unit move from vertex {label} on coordinate {coord}")


@lru_cache(maxsize=None)
def _free_balance_word(label: int, sign_a: int) -> tuple[int, ...]:
    """Shortest strong word balancing from a vertex without moving exponents."""
    if label == 0:
        return ()
    tables = _step_tables(sign_a)
    parents: dict[int, tuple[int, int] | None] = {label: None}
    frontier = [label]
    while frontier:
        nxt_frontier = []
        for lab in frontier:
            for i in range(12):
                nxt_label, dn, member = tables[lab][i]
                if dn != (0, 0, 0) or nxt_label == lab or nxt_label in parents:
                    continue
                parents[nxt_label] = (lab, i + 1)
                if nxt_label == 0:
                    word = []
                    cur = 0
                    while parents[cur] is not None:
                        prev, strong = parents[cur]
                        word.append(strong)
                        cur = prev
                    word.reverse()
                    return tuple(word)
                nxt_frontier.append(nxt_label)
        frontier = nxt_frontier
    raise VerificationFailure(f"no free balancing word from vertex {label}")


def _adjust_exponents_word(exps: Triple, label: int, target: Triple, sign_a: int) -> list[int]:
    """Strong word from (exps, label) to the balanced state at target.

    Small distances go through plain search (minimal chains); large ones are
    composed from cached unit moves plus a free balancing tail, keeping the
    construction linear in the exponent distance.
    """
    dist = sum(abs(t - p) for t, p in zip(target, exps))
    if dist <= 12:
        path = _bfs_strongs((exps, label), (tuple(target), 0), sign_a, max_len=3 * dist + 20)
        if path is None:
            raise NotFound("no adjustment chain within the expected bound")
        return [strong for strong, _ in path]
    word: list[int] = []
    cur = list(exps)
    cur_label = label
    for coord in range(3):
        while cur[coord] != target[coord]:
            direction = 1 if target[coord] > cur[coord] else -1
            unit, end_label = _unit_word(cur_label, coord, direction, sign_a)
            word.extend(unit)
            cur[coord] += direction
            cur_label = end_label
    word.extend(_free_balance_word(cur_label, sign_a))
    return word


# ---------------------------------------------------------------------------
# two-step reachability (cycle composition) and density search

def make_case_b(basis: GeneratorBasis) -> RateEnsemble:
    """Two-generator start with discrepancies (a, b, 0): the euro trader has
    moved both cross rates off balance by different steps."""
    if len(basis.values) != 2:
        raise ValueError("two-generator basis required")
    coeffs = [[0, 0] for _ in range(6)]
    coeffs[3] = [1, 0]
    coeffs[4] = [0, 1]
    return RateEnsemble.lattice(basis, coeffs)


def _require_case_b(ensemble: RateEnsemble) -> None:
    if ensemble.mode != "lattice" or len(ensemble.basis.values) != 2:
        raise WrongCaseError("two-generator lattice ensemble required")
    d = discrepancies(ensemble)
    if d.coeffs != ((1, 0), (0, 1), (0, 0)):
        raise WrongCaseError("discrepancies must be exactly (a, b, 0)")


def reach_exponents(start: RateEnsemble, m: Triple, n: Triple) -> Chain:
    """Chain shifting the dollar log-rates by (m1*a - n1*b, m2*a + n2*b,
    m3*a - n3*b) and ending balanced; n must be non-negative.

    Composes the three canonical knot cycles (which load b-cargo), hops off
    the two-step component, then adjusts the a-exponents in the single-step
    regime.  The end state is verified exactly.
    """
    _require_case_b(start)
    if any(x < 0 for x in n):
        raise ValueError("b-step counts must be non-negative")
    a, b = start.basis.values
    graph = travel_graph(a, b, start.basis.relation)

    counts = (n[0], n[1], n[2] + 1)
    cycles = ((1, 2, 5, 6, 1), (1, 2, 3, 6, 1), (1, 2, 3, 4, 1))
    word: list[int] = []
    position = (1, 3)   # the start discrepancy is terminal 3 of knot 1
    for cycle, count in zip(cycles, counts):
        for _ in range(count):
            part, position = _walk_word(graph, cycle, position)
            word.extend(part)
    # hop off the component: move to terminal 1 of knot 1, then the strong
    # operator that zeroes the middle discrepancy pair leaves a pure-a state
    knot, j = position
    if knot != 1:
        raise VerificationFailure("cycle composition did not return to knot 1")
    if j != 1:
        word.append(RETURN_STRONG[j])
        word.append(OUT_STRONG[1])
    word.append(6)

    members, r = _execute_strongs(start, word)
    d = discrepancies(r)
    if d.coeffs != ((0, 0), (1, 0), (0, 0)):
        raise VerificationFailure("hop did not land on the pure-a vertex")

    s = counts[0] + counts[1] + counts[2]
    exps = tuple(r.coeffs[j][0] for j in range(3))
    if exps != (s, s, s - 1) or [r.coeffs[j][1] for j in range(3)] != [-n[0], n[1], -n[2]]:
        raise VerificationFailure("cycle cargo accounting broke")

    sign_a = 1 if a > 0 else -1
    tail = _adjust_exponents_word(exps, 11, tuple(m), sign_a)
    members2, r2 = _execute_strongs(r, tail)

    want = [
        [m[0], -n[0]], [m[1], n[1]], [m[2], -n[2]],
        [m[1] - m[0], n[1] + n[0]], [m[2] - m[0], -n[2] + n[0]], [m[2] - m[1], -n[2] - n[1]],
    ]
    if [list(row) for row in r2.coeffs] != want:
        raise VerificationFailure("end state does not match the requested exponents")
    if not is_balanced(r2):
        raise VerificationFailure("end state is not balanced")
    return Chain(items=tuple(members + members2))


def _convergent_denominators(x: float, limit: int) -> list[int]:
    """Denominators of the continued-fraction convergents of |x| up to limit."""
    x = abs(x)
    out = []
    h0, h1 = 0, 1
    for _ in range(64):
        a0 = math.floor(x)
        h0, h1 = h1, a0 * h1 + h0
        if h1 > limit:
            break
        out.append(h1)
        frac = x - a0
        if frac < 1e-15:
            break
        x = 1.0 / frac
    return out


def _solve_coefficient(delta: float, a: float, b: float, b_sign: int, tol: float, budget: int) -> tuple[int, int]:
    """Integers (m, n >= 0) with |m*a + b_sign*n*b - delta| <= tol.

    Convergent denominators of b/a are scanned first, then all n up to the
    budget; deterministic.
    """
    candidates = _convergent_denominators(b / a, budget)
    candidates += [n for n in range(budget + 1)]
    for n in candidates:
        m = round((delta - b_sign * n * b) / a)
        if abs(m * a + b_sign * n * b - delta) <= tol:
            return m, n
    raise NotFound("approximation budget exhausted")


def approximate_target(
    start: RateEnsemble,
    target: RateEnsemble,
    eps: float,
    budget: int,
) -> Chain:
    """Chain ending balanced within eps (max-norm over the six log-rates) of a
    balanced numeric target; requires a two-step start with irrational ratio.

    Density of {m*a + n*b} makes this succeed for any eps given enough
    budget; the search for (m, n) is per-coordinate and deterministic.
    """
    _require_case_b(start)
    if start.basis.relation is not None:
        raise WrongCaseError("declared rational step ratio; the target set is a lattice")
    if not is_balanced(target, tol=1e-9):
        raise ValueError("target must be balanced")
    a, b = start.basis.values
    tol = eps / 2.0
    signs = (-1, 1, -1)
    m: list[int] = []
    n: list[int] = []
    for coord in range(3):
        delta = target.log_rates[coord] - start.log_rates[coord]
        mi, ni = _solve_coefficient(delta, a, b, signs[coord], tol, budget)
        m.append(mi)
        n.append(ni)
    chain = reach_exponents(start, tuple(m), tuple(n))
    end = apply_chain(start, chain)[-1]
    err = max(abs(x - y) for x, y in zip(end.log_rates, target.log_rates))
    if err > eps:
        raise VerificationFailure(f"approximation error {err} exceeds eps {eps}")
    return chain


# ---------------------------------------------------------------------------
# reachability classification

@dataclass(frozen=True)
class LatticeSpec:
    """Description of the balanced set reachable from a discrepancy triple."""

    tag: str                        # "empty" | "dense" | "lattice"
    gamma: float = 0.0
    multipliers: tuple[int, ...] = ()
    note: str = ""

    @property
    def steps(self) -> tuple[float, ...]:
        return tuple(k * self.gamma for k in self.multipliers)


def _check_declared(value: float, base: float, q: Fraction | None) -> None:
    if q is None:
        return
    if abs(value - base * float(q)) > 1e-9 * max(1.0, abs(value)):
        raise ValueError("declared ratio disagrees with the numeric values")


def reachability_classification(
    d: tuple[float, float, float],
    q1: Fraction | None = None,
    q2: Fraction | None = None,
    q32: Fraction | None = None,
) -> LatticeSpec:
    """Classify which balanced ensembles operator chains can reach.

    ``q1``/``q2`` declare d2/d1 and d3/d1 as exact fractions, ``q32`` covers
    d3/d2 when the first discrepancy vanishes; None declares irrationality.
    Zero discrepancies need no declaration.
    """
    zeros = [abs(x) < 1e-15 for x in d]
    if all(zeros):
        return LatticeSpec(tag="empty", note="already balanced; nothing to reach")
    nonzero = [x for x in d if abs(x) >= 1e-15]
    if len(nonzero) == 1:
        step = nonzero[0]
        return LatticeSpec(tag="lattice", gamma=step, multipliers=(1,),
                           note="single nonzero discrepancy; one-step lattice")
    if len(nonzero) == 2:
        x, y = nonzero
        q = q1 if zeros[2] else q2 if zeros[1] else q32
        _check_declared(y, x, q)
        if q is None:
            return LatticeSpec(tag="dense", note="irrational discrepancy ratio")
        # y/x = m/n reduced: the common grain is x/n = y/m
        grain = x / q.denominator
        return LatticeSpec(tag="lattice", gamma=grain, multipliers=(1,),
                           note=f"rational ratio {q}; one-step lattice")
    _check_declared(d[1], d[0], q1)
    _check_declared(d[2], d[0], q2)
    if q1 is None or q2 is None:
        return LatticeSpec(tag="dense", note="an irrational discrepancy ratio")
    n1, n2 = q1.denominator, q2.denominator
    lcm = n1 * n2 // math.gcd(n1, n2)
    if lcm == n1 * n2:
        return LatticeSpec(tag="lattice", gamma=d[0] / lcm, multipliers=(1,),
                           note="coprime denominators; one-step lattice")
    k1 = lcm
    k2 = q1.numerator * (lcm // n1)
    k3 = q2.numerator * (lcm // n2)
    g = math.gcd(math.gcd(abs(k1), abs(k2)), abs(k3))
    k1, k2, k3 = k1 // g, k2 // g, k3 // g
    gamma = d[0] / k1
    multipliers = (
        math.gcd(abs(k1), abs(k2)),
        math.gcd(abs(k1), abs(k3)),
        math.gcd(abs(k2), abs(k3)),
        math.gcd(abs(k1 - k2), abs(k3)),
        math.gcd(abs(k1 + k3), abs(k2)),
        math.gcd(abs(k1), abs(k2 - k3)),
    )
    return LatticeSpec(
        tag="lattice", gamma=gamma, multipliers=multipliers,
        note="six sublattice steps; the reachable set is their union",
    )
