"""Frozen reference transcriptions used to cross-check derived structures.

Everything in this module was transcribed by hand from the published source
material and is deliberately kept verbatim, including its typos.  The engine
derives all operators, matrices and tables from first principles; the verify
suites diff those derivations against these transcriptions and surface every
disagreement as an explicit, named deviation.  A deviation never silently
passes or silently fails a run.

Vectors are integer coefficient rows over the six principal log-rates
(l1..l6) unless noted; symbolic scalars over two step parameters are (ca, cb)
integer pairs meaning ca*a + cb*b.
"""

from __future__ import annotations

# --- conditional arbitrage table (24 rows) ---------------------------------
# activation condition as printed: active iff <vector, log R> > 0
REF_ACTIVATION_CONDITIONS: tuple[tuple[int, ...], ...] = (
    (-1, -1, 0, 1, 0, 0),   # row 1 as printed; inconsistent with the profit rule
    (-1, 0, 1, 0, -1, 0),
    (1, -1, 0, 1, 0, 0),
    (0, -1, 1, 0, 0, -1),
    (1, 0, -1, 0, 1, 0),
    (0, 1, -1, 0, 0, 1),
    (1, -1, 0, 1, 0, 0),
    (1, 0, -1, 0, 1, 0),
    (-1, 1, 0, -1, 0, 0),
    (0, 0, 0, -1, 1, -1),
    (-1, 0, 1, 0, -1, 0),
    (0, 0, 0, 1, -1, 1),
    (-1, 1, 0, -1, 0, 0),
    (0, 1, -1, 0, 0, 1),
    (1, -1, 0, 1, 0, 0),
    (0, 0, 0, 1, -1, 1),
    (0, -1, 1, 0, 0, -1),
    (0, 0, 0, -1, 1, -1),
    (-1, 0, 1, 0, -1, 0),
    (0, -1, 1, 0, 0, -1),
    (1, 0, -1, 0, 1, 0),
    (0, 0, 0, -1, 1, -1),
    (0, 1, -1, 0, 0, 1),
    (0, 0, 0, 1, -1, 1),
)

# action column: (affected principal index 0..5, new-value combination)
REF_ACTIONS: tuple[tuple[int, tuple[int, ...]], ...] = (
    (0, (0, 1, 0, -1, 0, 0)),
    (0, (0, 0, 1, 0, -1, 0)),
    (1, (1, 0, 0, 1, 0, 0)),
    (1, (0, 0, 1, 0, 0, -1)),
    (2, (1, 0, 0, 0, 1, 0)),
    (2, (0, 1, 0, 0, 0, 1)),
    (0, (0, 1, 0, -1, 0, 0)),
    (0, (0, 0, 1, 0, -1, 0)),
    (3, (-1, 1, 0, 0, 0, 0)),
    (3, (0, 0, 0, 0, 1, -1)),
    (4, (-1, 0, 1, 0, 0, 0)),
    (4, (0, 0, 0, 1, 0, 1)),
    (1, (1, 0, 0, 1, 0, 0)),
    (1, (0, 0, 1, 0, 0, -1)),
    (3, (-1, 1, 0, 0, 0, 0)),
    (3, (0, 0, 0, 0, 1, -1)),
    (5, (0, -1, 1, 0, 0, 0)),
    (5, (0, 0, 0, -1, 1, 0)),
    (2, (1, 0, 0, 0, 1, 0)),
    (2, (0, 1, 0, 0, 0, 1)),
    (4, (-1, 0, 1, 0, 0, 0)),
    (4, (0, 0, 0, 1, 0, 1)),
    (5, (0, -1, 1, 0, 0, 0)),
    (5, (0, 0, 0, -1, 1, 0)),
)

# --- strong arbitrage table (12 rows): action + conditional member pair ----
REF_STRONG_ACTIONS: tuple[tuple[int, tuple[int, ...], tuple[int, int]], ...] = (
    (0, (0, 1, 0, -1, 0, 0), (1, 7)),
    (0, (0, 0, 1, 0, -1, 0), (2, 8)),
    (1, (1, 0, 0, 1, 0, 0), (3, 13)),
    (1, (0, 0, 1, 0, 0, -1), (4, 14)),
    (2, (1, 0, 0, 0, 1, 0), (5, 19)),
    (2, (0, 1, 0, 0, 0, 1), (6, 20)),
    (3, (-1, 1, 0, 0, 0, 0), (9, 15)),
    (3, (0, 0, 0, 0, 1, -1), (10, 16)),
    (4, (-1, 0, 1, 0, 0, 0), (11, 21)),
    (4, (0, 0, 0, 1, 0, 1), (12, 22)),
    (5, (0, -1, 1, 0, 0, 0), (17, 23)),
    (5, (0, 0, 0, -1, 1, 0), (18, 24)),
)

# --- printed linearization matrices (row convention as printed) -------------
REF_B_MATRICES: tuple[tuple[tuple[int, ...], ...], ...] = (
    ((0, 0, 0, 0, 0, 0), (-1, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
     (1, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    ((0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
     (0, 0, 0, 1, 0, 0), (-1, 0, 0, 0, 1, 0), (1, 0, 0, 0, 0, 1)),
    ((1, 0, 0, 1, 0, 0), (0, 1, 0, 1, 0, 0), (0, 0, 1, 0, 0, 0),
     (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    ((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, -1, 0, 0),
     (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 1, 0, 1)),
    ((1, 0, 0, 0, 0, 1), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
     (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 1), (0, 0, 0, 0, 0, 0)),
    ((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 1),
     (0, 0, 0, 1, 0, 1), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 0)),
    ((1, -1, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
     (0, 1, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    ((1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0), (0, -1, 1, 0, 0, 0),
     (0, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    ((1, 0, 0, 0, -1, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
     (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1)),
    ((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 1, 0),
     (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1)),
    ((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0),
     (0, 0, -1, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)),
    ((1, 0, 0, 0, 0, 0), (0, 1, -1, 0, 0, 0), (0, 0, 0, 0, 0, 0),
     (0, 0, 0, 1, 0, 0), (0, 0, 1, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
)

REF_Q_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 1, 0, 0),   # spurious 1 at column 4 as printed
    (0, 0, 1, 0, 0, 0),
    (1, -1, 0, 1, 0, 0),
    (1, 0, -1, 0, 1, 0),
    (0, 1, -1, 0, 0, 1),
)

REF_Q_INVERSE: tuple[tuple[int, ...], ...] = (
    (1, 0, 0, -1, -1, 0),
    (0, 1, 0, 1, 0, -1),
    (0, 0, 1, 0, 1, 1),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
)

REF_G_MATRICES: tuple[tuple[tuple[int, ...], ...], ...] = (
    ((0, -1, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (-1, 0, 0), (0, 0, 1)),
    ((0, 0, 1), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (1, 0, 0)),
    ((1, 0, 0), (0, 0, -1), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (0, -1, 0)),
    ((0, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((0, 0, 0), (1, 1, 0), (-1, 0, 1)),
    ((1, 0, 0), (0, 0, 0), (0, 0, 1)),
    ((1, 1, 0), (0, 0, 0), (0, 1, 1)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 0)),
    ((1, 0, -1), (0, 1, 1), (0, 0, 0)),
)

REF_H_MATRICES: tuple[tuple[tuple[int, ...], ...], ...] = (
    ((-1, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (-1, 0, 0), (0, 0, 0)),
    ((0, 1, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, -1, 0)),
    ((0, 0, 0), (0, 0, 1), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 1)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
)

# --- single-step vertex set (coefficients of the step a) --------------------
REF_D12: tuple[tuple[int, int, int], ...] = (
    (0, 0, 1), (-1, 0, 1), (-1, 0, 0), (-1, -1, 0), (0, -1, 0), (0, -1, -1),
    (0, 0, -1), (1, 0, -1), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 1, 1),
)

# transition table: entry [i-1][j-1] = image vertex index of D_j under strong
# arbitrage i (0 = the zero triple), exactly as printed; five cells contradict
# the printed generator matrices (see REF_TRANSITION_TABLE_TYPOS)
REF_TRANSITION_TABLE: tuple[tuple[int, ...], ...] = (
    (1, 12, 11, 0, 5, 6, 7, 6, 5, 0, 11, 12),
    (1, 2, 3, 0, 9, 8, 7, 8, 9, 0, 3, 2),
    (1, 0, 7, 6, 5, 6, 7, 0, 1, 12, 11, 12),
    (1, 0, 3, 4, 5, 4, 3, 0, 9, 10, 11, 10),
    (1, 2, 3, 2, 1, 0, 7, 8, 9, 8, 7, 0),
    (5, 4, 3, 4, 5, 0, 11, 10, 9, 10, 11, 0),
    (1, 1, 0, 5, 5, 6, 7, 7, 0, 11, 11, 12),
    (2, 2, 0, 4, 4, 6, 8, 8, 0, 10, 10, 12),
    (1, 2, 3, 3, 0, 7, 7, 8, 9, 9, 0, 1),
    (12, 2, 3, 3, 0, 6, 6, 8, 9, 10, 0, 12),
    (0, 3, 3, 4, 5, 5, 0, 9, 9, 10, 11, 10),
    (0, 2, 2, 4, 6, 6, 0, 8, 8, 10, 12, 12),
)

# (strong index, vertex index) -> (printed cell, derived cell); each derived
# value cross-checked by direct six-rate simulation
REF_TRANSITION_TABLE_TYPOS: dict[tuple[int, int], tuple[int, int]] = {
    (4, 1): (1, 9),
    (10, 3): (3, 4),
    (10, 4): (3, 4),
    (10, 9): (9, 10),
    (11, 12): (10, 11),
}

# undirected vertex-graph incidence (zero vertex and directions dropped)
REF_VERTEX_INCIDENCE: tuple[tuple[int, ...], ...] = (
    (1, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1),
    (1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (0, 1, 1, 1, 0, 0, 1, 0, 0, 0, 1, 0),
    (0, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0),
    (1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0),
    (1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1),
    (0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1),
    (1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1),
)

# --- semigroup component data ----------------------------------------------
# lexicographically smallest matrices of the seven rank-1 components
REF_RANK1_REPRESENTATIVES: tuple[tuple[tuple[int, ...], ...], ...] = (
    ((-1, -1, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (-1, -1, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (-1, -1, 0)),
    ((-1, -1, 0), (1, 1, 0), (0, 0, 0)),
    ((-1, -1, 0), (0, 0, 0), (-1, -1, 0)),
    ((0, 0, 0), (-1, -1, 0), (1, 1, 0)),
    ((-1, -1, 0), (1, 1, 0), (-1, -1, 0)),
)

# transitions out of the six rank-2 components (targets among 1..13)
REF_COMPONENT_TRANSITIONS: dict[int, tuple[int, ...]] = {
    1: (9, 10, 13),
    2: (8, 11, 13),
    3: (7, 12, 13),
    4: (8, 9, 12),
    5: (7, 9, 11),
    6: (7, 8, 10),
}

# --- two-step vertex set (pairs of coefficients over a, b) ------------------
REF_D24: tuple[tuple[tuple[int, int], ...], ...] = (
    ((1, 0), (0, 1), (-1, 1)),
    ((-1, 1), (0, 1), (1, 0)),
    ((1, 0), (1, -1), (0, -1)),
    ((-1, 1), (-1, 0), (0, -1)),
    ((0, -1), (1, -1), (1, 0)),
    ((0, -1), (-1, 0), (-1, 1)),
    ((0, 0), (0, 1), (-1, 1)),
    ((1, 0), (0, 0), (-1, 1)),
    ((1, 0), (0, 1), (0, 0)),
    ((0, 0), (0, 1), (1, 0)),
    ((-1, 1), (0, 0), (1, 0)),
    ((-1, 1), (0, 1), (0, 0)),
    ((0, 0), (-1, 0), (0, -1)),
    ((-1, 1), (0, 0), (0, -1)),
    ((-1, 1), (-1, 0), (0, 0)),
    ((0, 0), (1, -1), (0, -1)),
    ((1, 0), (0, 0), (0, -1)),
    ((1, 0), (1, -1), (0, 0)),
    ((0, 0), (1, -1), (1, 0)),
    ((0, -1), (0, 0), (1, 0)),
    ((0, -1), (1, -1), (0, 0)),
    ((0, 0), (-1, 0), (-1, 1)),
    ((0, -1), (0, 0), (-1, 1)),
    ((0, -1), (-1, 0), (0, 0)),
)

# --- the 24-periodic chain and its vertex route -----------------------------
REF_STAR_CHAIN: tuple[int, ...] = (
    15, 10, 3, 21, 11, 8, 24, 17, 6, 9, 16, 13,
    12, 22, 14, 18, 23, 15, 5, 7, 4, 19, 1, 5,
)

#: vertex route of the 24-step periodic chain (25 labels, start == end)
REF_STAR_ROUTE: tuple[int, ...] = (
    10, 11, 10, 12, 1, 12, 2, 3, 2, 4, 5, 4, 6,
    7, 6, 8, 9, 8, 10, 8, 6, 4, 2, 12, 10,
)

# --- chain-synthesis building blocks ----------------------------------------
REF_BASIC_BLOCKS_PLUS = {1: (21, 16, 1), 2: (3, 17, 10), 3: (5, 18, 12)}
REF_BASIC_BLOCKS_MINUS = {1: (8, 9, 11), 2: (15, 18, 14), 3: (21, 23, 20)}

# auxiliary blocks for start ensembles 2 and 3 / 6; 34 is an impossible
# symbol kept verbatim (there are only 24 arbitrages)
REF_AUX_BLOCKS_PLUS = {1: (1, 21, 16), 2: (13, 23, 16), 3: (24, 12, 19)}
REF_AUX_BLOCKS_MINUS = {1: (9, 11, 8), 2: (9, 34, 4), 3: (6, 11, 17)}
REF_AUX2_BLOCKS_PLUS = {1: (18, 12, 5), 2: (23, 16, 13), 3: (18, 12, 5)}
REF_AUX2_BLOCKS_MINUS = {1: (20, 21, 23), 2: (4, 9, 24), 3: (20, 21, 23)}

# --- knot structure over (a, b) ---------------------------------------------
_P = tuple[int, int]


def _t(p1: _P, p2: _P, p3: _P) -> tuple[_P, _P, _P]:
    return (p1, p2, p3)


A: _P = (1, 0)
B: _P = (0, 1)
NA: _P = (-1, 0)
NB: _P = (0, -1)
AB: _P = (1, -1)    # a - b
BA: _P = (-1, 1)    # -a + b
Z: _P = (0, 0)

# commuter values as printed (entries 3 and 4 are interchanged relative to
# the printed terminal lists; the derivation swaps them back)
REF_COMMUTERS: tuple[tuple[_P, _P, _P], ...] = (
    _t(A, B, BA),
    _t(BA, B, A),
    _t(A, AB, NB),
    _t(BA, NA, NB),
    _t(NB, AB, A),
    _t(NB, NA, BA),
)

# terminal triples exactly as printed: REF_TERMINALS[i-1][j-1] = T^j_i
REF_TERMINALS: tuple[tuple[tuple[_P, _P, _P], ...], ...] = (
    (_t(Z, B, BA), _t(A, Z, BA), _t(A, B, Z)),
    (_t(Z, B, A), _t(BA, Z, A), _t(BA, B, Z)),
    (_t(Z, NA, NB), _t(BA, Z, NB), _t(BA, NA, Z)),
    (_t(Z, AB, NB), _t(A, Z, NB), _t(A, AB, Z)),
    (_t(Z, AB, A), _t(NB, Z, A), _t(NB, AB, Z)),
    (_t(Z, NA, BA), _t(NB, Z, BA), _t(NB, NA, Z)),
)

# travel rows as printed: (source (j, knot), strong index, target (j, knot), cargo)
REF_TRAVEL_ROWS: tuple[tuple[tuple[int, int], int, tuple[int, int], tuple[_P, _P, _P]], ...] = (
    ((1, 1), 3, (1, 2), _t(Z, A, Z)),
    ((1, 1), 5, (2, 4), _t(Z, Z, B)),
    ((2, 1), 1, (1, 6), _t(NA, Z, Z)),
    ((2, 1), 6, (3, 3), _t(Z, Z, NA)),
    ((3, 1), 2, (2, 6), _t(NB, Z, Z)),
    ((3, 1), 4, (3, 2), _t(Z, AB, Z)),
    ((1, 2), 2, (2, 5), _t(NB, Z, Z)),
    ((1, 2), 4, (3, 1), _t(Z, NA, Z)),
    ((3, 2), 1, (2, 2), _t(AB, Z, Z)),
    ((3, 2), 6, (3, 3), _t(Z, Z, NA)),
    ((1, 3), 2, (2, 4), _t(A, Z, Z)),
    ((1, 3), 4, (3, 6), _t(Z, B, Z)),
    ((1, 4), 2, (2, 3), _t(BA, Z, Z)),
    ((1, 4), 4, (3, 5), _t(Z, B, Z)),
    ((3, 4), 1, (1, 3), _t(NA, Z, Z)),
    ((3, 4), 6, (3, 1), _t(Z, Z, NB)),
    ((1, 5), 2, (2, 2), _t(BA, Z, Z)),
    ((1, 5), 4, (3, 4), _t(Z, NA, Z)),
    ((3, 5), 1, (1, 2), _t(B, Z, Z)),
    ((3, 5), 6, (3, 6), _t(Z, Z, A)),
    ((1, 6), 2, (2, 1), _t(A, Z, Z)),
    ((1, 6), 4, (3, 3), _t(Z, AB, Z)),
)

REF_KNOT_INCIDENCE: tuple[tuple[int, ...], ...] = (
    (0, 1, 0, 1, 0, 1),
    (1, 0, 1, 0, 1, 0),
    (0, 0, 0, 1, 0, 1),
    (1, 0, 1, 0, 1, 0),
    (0, 1, 0, 1, 0, 1),
    (0, 1, 0, 0, 0, 0),
)

# the three knot cycles and their cargo sums as printed
REF_CYCLES: tuple[tuple[tuple[int, ...], tuple[_P, _P, _P]], ...] = (
    ((1, 2, 5, 6, 1), _t(AB, A, Z)),
    ((1, 2, 3, 6, 1), _t(A, (1, 1), A)),
    ((1, 2, 3, 4, 1), _t(A, A, AB)),
)

# --- worked gcd example ------------------------------------------------------
REF_GCD_EXAMPLE_K = (595, 1683, 308)
REF_GCD_EXAMPLE_STEPS = (17, 7, 11, 4, 3, 5)

# --- expected deviations (id -> suite) --------------------------------------
# Any observed reference mismatch must be one of these; anything extra, or
# any of these failing to appear, fails verification.
EXPECTED_DEVIATIONS: dict[str, str] = {
    "table1-row1-condition": "core",
    "b-matrix-cells": "matrices",
    "q-matrix-row2": "matrices",
    "transition-table-cells": "semigroup",
    "membership-rule-signs": "semigroup",
    "knot-incidence-rows-3-6": "synthesis",
    "chain-formula-misses": "synthesis",
    "variant-block-bad-symbol": "synthesis",
    "estN-bound-off-by-one": "synthesis",
    "star-chain-entries": "synthesis",
    "knot-terminal-assignment-3-4": "synthesis",
    "commuter-return-pairing": "synthesis",
    "cargo-row-labels": "synthesis",
    "cycle1-cargo-sum": "synthesis",
    "gcd-pairing-display": "synthesis",
    "case-b-step-denominator": "synthesis",
}
