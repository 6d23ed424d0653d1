"""The finite semigroup of discrepancy operators and its orbit structure.

The twelve 3x3 generators act on discrepancy row-triples.  Their closure
under multiplication is finite; its connected components (mutual one-sided
reachability classes) drive everything qualitative about the dynamics:
which discrepancy sets are invariant, how orbits hop between them, and why
every periodic operator chain is eventually periodic or geometrically
divergent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .linalg import IntMatrix, generator_matrices, mat_mul, vec_mat
from .market import Chain, RateEnsemble, apply_chain, strong_arbitrage
from .reference import REF_D12, REF_D24, REF_RANK1_REPRESENTATIVES

CLOSURE_CAP = 10**6

#: canonical vertex labels for single-step discrepancy sets, index 1..12
VERTICES_SINGLE: tuple[tuple[int, int, int], ...] = REF_D12

#: canonical two-step vertex formulas, index 1..24, entries (ca, cb)
VERTICES_DOUBLE: tuple[tuple[tuple[int, int], ...], ...] = REF_D24


class VerificationFailure(Exception):
    """A structural claim the engine relies on failed to reproduce."""


def matrix_rank(m: IntMatrix) -> int:
    """Exact rank of a 3x3 integer matrix."""
    if all(all(c == 0 for c in row) for row in m):
        return 0
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    if det != 0:
        return 3
    for r1 in range(3):
        for r2 in range(r1 + 1, 3):
            for c1 in range(3):
                for c2 in range(c1 + 1, 3):
                    if m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1] != 0:
                        return 2
    return 1


@dataclass(frozen=True)
class SemigroupElement:
    matrix: IntMatrix
    rank: int
    component: int


@lru_cache(maxsize=None)
def closure() -> tuple[IntMatrix, ...]:
    """All products of the twelve generators, by fixed-point closure."""
    gens = generator_matrices()
    seen: dict[IntMatrix, None] = {g: None for g in gens}
    frontier = list(seen)
    while frontier:
        fresh = []
        for m in frontier:
            for g in gens:
                prod = mat_mul(m, g)
                if prod not in seen:
                    seen[prod] = None
                    fresh.append(prod)
        if len(seen) > CLOSURE_CAP:
            raise VerificationFailure("closure exceeded the safety cap")
        frontier = fresh
    return tuple(seen)


def _strongly_connected(elements: Sequence[IntMatrix]) -> list[set[IntMatrix]]:
    """Kosaraju components of the right-multiplication graph."""
    gens = generator_matrices()
    index = {m: i for i, m in enumerate(elements)}
    n = len(elements)
    fwd: list[list[int]] = [[] for _ in range(n)]
    rev: list[list[int]] = [[] for _ in range(n)]
    for i, m in enumerate(elements):
        for g in gens:
            j = index[mat_mul(m, g)]
            fwd[i].append(j)
            rev[j].append(i)
    order: list[int] = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        stack = [(start, iter(fwd[start]))]
        seen[start] = True
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(fwd[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    comp = [-1] * n
    sccs: list[set[IntMatrix]] = []
    for start in reversed(order):
        if comp[start] != -1:
            continue
        cid = len(sccs)
        bucket = {elements[start]}
        comp[start] = cid
        stack2 = [start]
        while stack2:
            node = stack2.pop()
            for nxt in rev[node]:
                if comp[nxt] == -1:
                    comp[nxt] = cid
                    bucket.add(elements[nxt])
                    stack2.append(nxt)
        sccs.append(bucket)
    return sccs


@lru_cache(maxsize=None)
def connected_components() -> dict[IntMatrix, int]:
    """Partition the closure into the canonical components 1..14.

    Components 1..6 contain the generator pairs (G_{2i-1}, G_{2i}); 7..13 are
    the rank-one classes identified by their lexicographically smallest
    member; 14 is the zero matrix alone.
    """
    elements = closure()
    gens = generator_matrices()
    sccs = _strongly_connected(elements)
    scc_of: dict[IntMatrix, int] = {}
    for cid, bucket in enumerate(sccs):
        for m in bucket:
            scc_of[m] = cid
    label_of_scc: dict[int, int] = {}
    for i in range(1, 7):
        cid = scc_of[gens[2 * i - 2]]
        if scc_of[gens[2 * i - 1]] != cid:
            raise VerificationFailure(f"generator pair {2*i-1},{2*i} split across components")
        label_of_scc[cid] = i
    for offset, rep in enumerate(REF_RANK1_REPRESENTATIVES):
        if rep not in scc_of:
            raise VerificationFailure("rank-one representative missing from closure")
        label_of_scc[scc_of[rep]] = 7 + offset
    zero = tuple((0, 0, 0) for _ in range(3))
    label_of_scc[scc_of[zero]] = 14
    if len(label_of_scc) != len(sccs):
        raise VerificationFailure(
            f"expected 14 components, found {len(sccs)} reachability classes"
        )
    # membership rule: within a component every element reaches every other
    # (and itself) by a nonempty product
    for bucket in sccs:
        sample = next(iter(bucket))
        reach: set[IntMatrix] = set()
        frontier = [sample]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    p = mat_mul(m, g)
                    if p in bucket and p not in reach:
                        reach.add(p)
                        nxt.append(p)
            frontier = nxt
        if reach != bucket:
            raise VerificationFailure("component not mutually reachable")
    return {m: label_of_scc[scc_of[m]] for m in elements}


@lru_cache(maxsize=None)
def enumerate_products() -> tuple[SemigroupElement, ...]:
    comp = connected_components()
    return tuple(
        SemigroupElement(matrix=m, rank=matrix_rank(m), component=comp[m])
        for m in closure()
    )


@lru_cache(maxsize=None)
def component_transitions() -> dict[int, frozenset[int]]:
    """i -> {j != i: some element of U_i times a generator lands in U_j}."""
    comp = connected_components()
    gens = generator_matrices()
    out: dict[int, set[int]] = {i: set() for i in range(1, 15)}
    for m, ci in comp.items():
        for g in gens:
            cj = comp[mat_mul(m, g)]
            if cj != ci:
                out[ci].add(cj)
    return {i: frozenset(targets) for i, targets in out.items()}


@lru_cache(maxsize=None)
def component_reachability() -> dict[int, frozenset[int]]:
    """Transitive closure of component_transitions: i -> components reachable
    by right-multiplying with any semigroup element (one generator at a time
    the rank-two classes only reach rank-one classes; the zero class needs a
    longer product)."""
    trans = component_transitions()
    reach: dict[int, set[int]] = {i: set(t) for i, t in trans.items()}
    changed = True
    while changed:
        changed = False
        for i in reach:
            extra = set()
            for j in reach[i]:
                extra |= reach[j]
            extra -= reach[i] | {i}
            if extra:
                reach[i] |= extra
                changed = True
    return {i: frozenset(t) for i, t in reach.items()}


# ---------------------------------------------------------------------------
# discrepancy vertex labelling and the strong-operator transition table

def vertex_label_single(triple: Sequence[int]) -> int | None:
    """Index 0..12 of an integer triple in step units; None if outside."""
    t = tuple(triple)
    if t == (0, 0, 0):
        return 0
    try:
        return VERTICES_SINGLE.index(t) + 1
    except ValueError:
        return None


def gap_d_coeffs(i: int) -> tuple[int, int, int]:
    """Activation gap of strong arbitrage i as a discrepancy combination."""
    return tuple(strong_arbitrage(i).gap[3:6])


def discrepancy_transition_table(a: float = 1.0) -> tuple[tuple[int, ...], ...]:
    """12x12 table: image vertex of D_j under strong arbitrage i (0 = zero).

    Scale-free in the step a (a != 0 required); computed in exact integers.
    """
    if a == 0:
        raise ValueError("step must be nonzero")
    gens = generator_matrices()
    table = []
    for i in range(12):
        row = []
        for vertex in VERTICES_SINGLE:
            image = vec_mat(vertex, gens[i])
            label = vertex_label_single(image)
            if label is None:
                raise VerificationFailure(
                    f"transition left the single-step vertex set: {vertex} G{i+1} = {image}"
                )
            row.append(label)
        table.append(tuple(row))
    return tuple(table)


# ---------------------------------------------------------------------------
# orbit graphs

Pair = tuple[int, int]


def _pair_mul(triples: Sequence[Pair], g: IntMatrix) -> tuple[Pair, ...]:
    return tuple(
        (
            sum(triples[k][0] * g[k][j] for k in range(3)),
            sum(triples[k][1] * g[k][j] for k in range(3)),
        )
        for j in range(3)
    )


@dataclass(frozen=True)
class OrbitVertex:
    vid: int                      # 1-based canonical index within its family
    name: str
    pairs: tuple[Pair, Pair, Pair]
    values: tuple[float, float, float]
    aliases: tuple[int, ...]      # formula indices collapsing onto this vertex


@dataclass(frozen=True)
class OrbitEdge:
    source: int                   # vertex id; 0 is the balanced vertex
    target: int
    strong: int
    arbitrage: int | None         # conditional member realizing the move


@dataclass(frozen=True)
class DiscrepancyOrbit:
    a: float
    b: float
    family: str                   # "single" | "tetra" | "generic"
    vertices: tuple[OrbitVertex, ...]
    edges: tuple[OrbitEdge, ...]

    def vertex_by_id(self, vid: int) -> OrbitVertex:
        for v in self.vertices:
            if v.vid == vid:
                return v
        raise KeyError(vid)


def _member_for_gap(i: int, gap_value: float) -> int | None:
    op = strong_arbitrage(i)
    if gap_value > 1e-12:
        return op.member_pos
    if gap_value < -1e-12:
        return op.member_neg
    return None


def single_step_orbit(a: float) -> DiscrepancyOrbit:
    """Twelve-vertex orbit graph of a one-step perturbation, plus the balanced
    vertex; canonical single-step labelling."""
    if a == 0.0:
        raise ValueError("step must be nonzero")
    gens = generator_matrices()
    vertices = tuple(
        OrbitVertex(
            vid=j + 1,
            name=f"D{j + 1}",
            pairs=tuple((c, 0) for c in triple),
            values=tuple(c * a for c in triple),
            aliases=(j + 1,),
        )
        for j, triple in enumerate(VERTICES_SINGLE)
    )
    edges: list[OrbitEdge] = []
    for v, triple in zip(vertices, VERTICES_SINGLE):
        for i in range(1, 13):
            image = vec_mat(triple, gens[i - 1])
            label = vertex_label_single(image)
            if label is None:
                raise VerificationFailure("single-step set not closed")
            if label == v.vid:
                continue
            gap = sum(c * d for c, d in zip(gap_d_coeffs(i), v.values))
            edges.append(
                OrbitEdge(source=v.vid, target=label, strong=i,
                          arbitrage=_member_for_gap(i, gap))
            )
    return DiscrepancyOrbit(a=a, b=0.0, family="single",
                            vertices=vertices, edges=tuple(edges))


def _reduce_key(pair: Pair, a: float, b: float, ratio: Fraction | None):
    if ratio is not None:
        return pair[0] + pair[1] * ratio
    if b == 0.0:
        return (pair[0], 0) if a != 0.0 else (0, 0)
    if a == 0.0:
        return (pair[1], 0)
    value = pair[0] * a + pair[1] * b
    return round(value / (abs(a) + abs(b)) / 1e-9)


def _family_of(n_real: int, a: float, b: float, ratio: Fraction | None) -> str:
    if n_real == 24:
        return "generic"
    if n_real != 12:
        raise VerificationFailure(f"unexpected vertex collapse to {n_real} elements")
    if ratio is not None:
        if ratio in (Fraction(0), Fraction(1)):
            return "single"
        if ratio in (Fraction(-1), Fraction(2), Fraction(1, 2)):
            return "tetra"
        raise VerificationFailure(f"unexpected 12-vertex family at ratio {ratio}")
    scale = max(abs(a), abs(b))
    if b == 0.0 or a == 0.0 or abs(b - a) <= 1e-9 * scale:
        return "single"
    return "tetra"


def orbit_polyhedron(a: float, b: float, ratio: Fraction | None = None) -> DiscrepancyOrbit:
    """The connected discrepancy set through (a, b, -a+b) with its transitions.

    Vertices are named by their smallest defining formula index (1..24);
    degenerate step families collapse vertices, exactly when ``ratio``
    declares b/a as a fraction (or a step is zero), else by 1e-9 numeric
    dedup.  Moves that leave the set for a coarser family are not edges.
    """
    if a == 0.0 and b == 0.0:
        raise ValueError("step pair must not be (0, 0)")
    if ratio is not None and abs(b - a * float(ratio)) > 1e-12 * max(1.0, abs(b)):
        raise ValueError("declared ratio disagrees with the step values")

    def key3(pairs: Sequence[Pair]):
        return tuple(_reduce_key(p, a, b, ratio) for p in pairs)

    groups: dict[tuple, list[int]] = {}
    for idx, pairs in enumerate(VERTICES_DOUBLE, start=1):
        groups.setdefault(key3(pairs), []).append(idx)
    zero_key = key3(((0, 0), (0, 0), (0, 0)))

    vertices: list[OrbitVertex] = []
    vid_of_key: dict[tuple, int] = {zero_key: 0}
    for key, members in groups.items():
        if key == zero_key:
            continue
        vid = members[0]
        pairs = VERTICES_DOUBLE[vid - 1]
        vertices.append(
            OrbitVertex(
                vid=vid,
                name=f"D{vid}",
                pairs=pairs,
                values=tuple(p[0] * a + p[1] * b for p in pairs),
                aliases=tuple(members),
            )
        )
        vid_of_key[key] = vid
    vertices.sort(key=lambda v: v.vid)
    family = _family_of(len(vertices), a, b, ratio)

    gens = generator_matrices()
    edges: list[OrbitEdge] = []
    for v in vertices:
        for i in range(1, 13):
            image = _pair_mul(v.pairs, gens[i - 1])
            key = key3(image)
            if key not in vid_of_key:
                continue
            target = vid_of_key[key]
            if target == v.vid:
                continue
            gap = sum(c * d for c, d in zip(gap_d_coeffs(i), v.values))
            edges.append(
                OrbitEdge(source=v.vid, target=target, strong=i,
                          arbitrage=_member_for_gap(i, gap))
            )
    return DiscrepancyOrbit(a=a, b=b, family=family,
                            vertices=tuple(vertices), edges=tuple(edges))


def vertex_incidence(orbit: DiscrepancyOrbit) -> tuple[tuple[int, ...], ...]:
    """Undirected incidence of a twelve-vertex orbit graph, balanced vertex
    dropped; diagonal entries mark vertices fixed by some strong operator."""
    if len(orbit.vertices) != 12:
        raise ValueError("incidence is defined for the twelve-vertex family")
    pos = {v.vid: k for k, v in enumerate(orbit.vertices)}
    m = [[0] * 12 for _ in range(12)]
    for e in orbit.edges:
        if e.source == 0 or e.target == 0:
            continue
        m[pos[e.source]][pos[e.target]] = 1
        m[pos[e.target]][pos[e.source]] = 1
    gens = generator_matrices()
    for v in orbit.vertices:
        if any(_pair_mul(v.pairs, g) == v.pairs for g in gens):
            m[pos[v.vid]][pos[v.vid]] = 1
    return tuple(tuple(row) for row in m)


# ---------------------------------------------------------------------------
# eventual periodicity of periodic operator chains

@dataclass(frozen=True)
class PeriodicOrbit:
    period: int


@dataclass(frozen=True)
class DivergentOrbit:
    period: int
    factors: tuple[float, ...]    # per-period multiplicative factor per rate


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def classify_periodic_chain(chain: Chain, start: RateEnsemble) -> PeriodicOrbit | DivergentOrbit:
    """Decide whether a periodic chain settles into a cycle or diverges.

    Simulates past the transient (36p steps), then scans divisors of 24p in
    ascending order for a constant state shift over one further full window.
    A zero shift is a genuine period; a nonzero constant shift means the six
    rates scale geometrically (reported as per-period factors).
    """
    if chain.period is None:
        raise ValueError("chain must be periodic")
    p = chain.period
    transient = 36 * p
    window = 24 * p
    traj = apply_chain(start, chain, steps=transient + 2 * window)
    exact = start.mode == "lattice"

    def shift(n: int, q: int):
        if exact:
            return tuple(
                tuple(x - y for x, y in zip(ra, rb))
                for ra, rb in zip(traj[n + q].coeffs, traj[n].coeffs)
            )
        return tuple(x - y for x, y in zip(traj[n + q].log_rates, traj[n].log_rates))

    def equal(s1, s2) -> bool:
        if exact:
            return s1 == s2
        return max(abs(x - y) for x, y in zip(s1, s2)) <= 1e-9

    def is_zero(s) -> bool:
        if exact:
            return all(all(c == 0 for c in row) for row in s)
        return max(abs(x) for x in s) <= 1e-9

    for q in _divisors(window):
        first = shift(transient, q)
        if all(equal(shift(n, q), first) for n in range(transient, transient + window + 1)):
            if is_zero(first):
                return PeriodicOrbit(period=q)
            if exact:
                basis = start.basis
                deltas = [sum(c * g for c, g in zip(row, basis.values)) for row in first]
            else:
                deltas = list(first)
            return DivergentOrbit(period=q, factors=tuple(math.exp(x) for x in deltas))
    raise VerificationFailure("no divisor of 24p yields a constant shift")


def reachable_discrepancies(d: Sequence[float]) -> set[tuple[float, ...]]:
    """All discrepancy triples reachable from d via operator chains, plus d."""
    start = tuple(d)
    out = {start}
    for m in closure():
        out.add(vec_mat(start, m))
    return out
