"""Integer-matrix linearization of the strong arbitrage operators.

Row-vector convention throughout: a matrix M acts as v -> v M, so
log(R Â_i) = (log R) B_i and v(R) = (log R) Q with
v(R) = (l1, l2, l3, d1, d2, d3).  The similarity Qinv B Q is block
triangular [[I, 0], [H, G]]: H carries the increment of the dollar rates,
G the discrepancy dynamics.  All matrices are derived from the operator
actions; the derivations are diffed against the transcribed reference
matrices elsewhere.
"""

from __future__ import annotations

from functools import lru_cache

from .market import (
    DISCREPANCY_VECTORS,
    RateEnsemble,
    discrepancies,
    strong_arbitrage,
)

IntMatrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(x: IntMatrix, y: IntMatrix) -> IntMatrix:
    cols = len(y[0])
    inner = len(y)
    return tuple(
        tuple(sum(row[k] * y[k][j] for k in range(inner)) for j in range(cols))
        for row in x
    )


def vec_mat(v: tuple, m: IntMatrix) -> tuple:
    return tuple(sum(v[k] * m[k][j] for k in range(len(v))) for j in range(len(m[0])))


def transpose(m: IntMatrix) -> IntMatrix:
    return tuple(zip(*m))


@lru_cache(maxsize=None)
def b_matrix(i: int) -> IntMatrix:
    """6x6 matrix of strong arbitrage i: identity except the target column."""
    op = strong_arbitrage(i)
    cols = [[1 if r == c else 0 for r in range(6)] for c in range(6)]
    cols[op.target] = list(op.combo)
    return tuple(tuple(cols[c][r] for c in range(6)) for r in range(6))


@lru_cache(maxsize=None)
def q_matrices() -> tuple[IntMatrix, IntMatrix]:
    """Change of basis with (log R) Q = (l1, l2, l3, d1, d2, d3).

    Columns of Q are e1, e2, e3 and the three discrepancy functionals; the
    inverse is computed in closed form and the pair multiplies to identity.
    """
    cols = [
        (1, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0),
        DISCREPANCY_VECTORS[0],
        DISCREPANCY_VECTORS[1],
        DISCREPANCY_VECTORS[2],
    ]
    q = tuple(tuple(cols[c][r] for c in range(6)) for r in range(6))
    # q = [[I, W], [0, I]] in 3x3 blocks, so the inverse flips the sign of W
    qinv = tuple(
        tuple(
            (1 if r == c else 0) if (r >= 3 or c < 3) else -q[r][c]
            for c in range(6)
        )
        for r in range(6)
    )
    if mat_mul(q, qinv) != identity(6):
        raise AssertionError("Q inverse derivation broke")
    return q, qinv


@lru_cache(maxsize=None)
def d_matrix(i: int) -> IntMatrix:
    """Block-triangular form Qinv B_i Q of strong arbitrage i."""
    q, qinv = q_matrices()
    return mat_mul(mat_mul(qinv, b_matrix(i)), q)


class BlockStructureError(Exception):
    """The similarity of a B matrix is not [[I, 0], [H, G]]."""


@lru_cache(maxsize=None)
def decompose_d(i: int) -> tuple[IntMatrix, IntMatrix]:
    """Return (G_i, H_i); raises BlockStructureError on a broken derivation."""
    d = d_matrix(i)
    for r in range(3):
        for c in range(3):
            if d[r][c] != (1 if r == c else 0):
                raise BlockStructureError(f"upper-left block of D_{i} not identity")
            if d[r][c + 3] != 0:
                raise BlockStructureError(f"upper-right block of D_{i} not zero")
    h = tuple(tuple(d[r + 3][c] for c in range(3)) for r in range(3))
    g = tuple(tuple(d[r + 3][c + 3] for c in range(3)) for r in range(3))
    return g, h


def g_matrix(i: int) -> IntMatrix:
    return decompose_d(i)[0]


def h_matrix(i: int) -> IntMatrix:
    return decompose_d(i)[1]


def vector_v(ensemble: RateEnsemble) -> tuple[float, ...]:
    """(l1, l2, l3, d1, d2, d3) = (log R) Q."""
    q, _ = q_matrices()
    return vec_mat(ensemble.log_rates, q)


def increment(ensemble: RateEnsemble, i: int) -> tuple[float, float, float]:
    """Change of the three dollar log-rates under strong arbitrage i.

    Equals discrepancies(R) . H_i exactly; computed from H so lattice
    coefficients stay integral.
    """
    _, h = decompose_d(i)
    d = discrepancies(ensemble)
    return tuple(vec_mat(d.values, h))


def increment_coeffs(ensemble: RateEnsemble, i: int) -> tuple[tuple[int, ...], ...] | None:
    """Lattice-exact increment rows (3 x n_generators), if in lattice mode."""
    d = discrepancies(ensemble)
    if d.coeffs is None:
        return None
    _, h = decompose_d(i)
    k = len(d.coeffs[0])
    return tuple(
        tuple(sum(d.coeffs[r][g] * h[r][c] for r in range(3)) for g in range(k))
        for c in range(3)
    )


def generator_matrices() -> tuple[IntMatrix, ...]:
    """The twelve discrepancy generators G_1..G_12."""
    return tuple(g_matrix(i) for i in range(1, 13))


def export_matrices() -> dict:
    """All derived matrices as one JSON-ready document."""
    q, qinv = q_matrices()
    return {
        "B": [[list(r) for r in b_matrix(i)] for i in range(1, 13)],
        "Q": [list(r) for r in q],
        "G": [[list(r) for r in g_matrix(i)] for i in range(1, 13)],
        "H": [[list(r) for r in h_matrix(i)] for i in range(1, 13)],
        "Qinv": [list(r) for r in qinv],
    }
