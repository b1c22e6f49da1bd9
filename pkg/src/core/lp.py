"""Dense two-phase simplex for small linear programs.

Solves ``max c·z subject to G z <= g`` with ``z`` free. Free variables are
split into positive and negative parts, every row gets a slack, and rows with
a negative right-hand side also get an artificial variable for phase one.
Bland's rule picks entering and leaving variables so degenerate problems
cannot cycle.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from src.utils.errors import LpError, LpInfeasibleError, LpIterationError, LpUnboundedError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TOL = 1e-9


class LpSolution(NamedTuple):
    value: float
    argmax: np.ndarray


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    column = tableau[:, col].copy()
    column[row] = 0.0
    tableau -= np.outer(column, tableau[row])
    basis[row] = col


def _set_objective(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray) -> None:
    """Write the reduced-cost row for maximizing ``cost`` over the current basis."""
    ncols = cost.size
    tableau[-1, :] = 0.0
    tableau[-1, :ncols] = -cost
    tableau[-1] += cost[basis] @ tableau[:-1]


def _run_simplex(
    tableau: np.ndarray, basis: np.ndarray, ncols: int, tol: float, max_pivots: int
) -> int:
    """Pivot until no reduced cost is negative.

    Returns:
        int: Number of pivots performed.

    Raises:
        LpUnboundedError: If an improving column has no positive entry.
        LpIterationError: If the pivot budget runs out.
    """
    for pivots in range(max_pivots):
        costs = tableau[-1, :ncols]
        candidates = np.flatnonzero(costs < -tol)
        if candidates.size == 0:
            return pivots
        col = int(candidates[0])

        column = tableau[:-1, col]
        rhs = tableau[:-1, -1]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            raise LpUnboundedError(f"Objective is unbounded along column {col}")

        ratios = rhs[rows] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
        row = int(ties[np.argmin(basis[ties])])
        _pivot(tableau, basis, row, col)

        rhs = tableau[:-1, -1]
        rhs[(rhs < 0.0) & (rhs > -tol)] = 0.0

    raise LpIterationError(f"Simplex did not finish within {max_pivots} pivots")


def lp_max(
    c: np.ndarray,
    G: np.ndarray,
    g: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_pivots: Optional[int] = None,
) -> LpSolution:
    """Maximize ``c·z`` over the polyhedron ``G z <= g``.

    Args:
        c (np.ndarray): Objective vector, length n.
        G (np.ndarray): Constraint matrix, N×n.
        g (np.ndarray): Right-hand side, length N.
        tol (float): Pivot and optimality tolerance.
        max_pivots (Optional[int]): Pivot budget per phase, defaults to
            ``50·(N + 2n)``.

    Returns:
        LpSolution: Optimal value and a maximizer.

    Raises:
        LpInfeasibleError: If the polyhedron is empty.
        LpUnboundedError: If the objective is unbounded above.
        LpIterationError: If a phase exceeds the pivot budget.
    """
    c = np.asarray(c, dtype=float).ravel()
    G = np.atleast_2d(np.asarray(G, dtype=float))
    g = np.asarray(g, dtype=float).ravel()
    n_rows, n = G.shape
    if c.size != n or g.size != n_rows:
        raise LpError(f"Inconsistent LP shapes: c {c.shape}, G {G.shape}, g {g.shape}")
    if max_pivots is None:
        max_pivots = 50 * (n_rows + 2 * n)

    sign = np.where(g < 0.0, -1.0, 1.0)
    artificial_rows = np.flatnonzero(g < 0.0)
    n_struct = 2 * n + n_rows
    n_art = artificial_rows.size
    ncols = n_struct + n_art

    tableau = np.zeros((n_rows + 1, ncols + 1))
    tableau[:n_rows, :n] = G
    tableau[:n_rows, n : 2 * n] = -G
    tableau[:n_rows, 2 * n : n_struct] = np.eye(n_rows)
    tableau[:n_rows] *= sign[:, None]
    tableau[artificial_rows, n_struct + np.arange(n_art)] = 1.0
    tableau[:n_rows, -1] = g * sign

    basis = np.arange(2 * n, n_struct)
    basis[artificial_rows] = n_struct + np.arange(n_art)

    if n_art:
        phase_one = np.zeros(ncols)
        phase_one[n_struct:] = -1.0
        _set_objective(tableau, basis, phase_one)
        _run_simplex(tableau, basis, ncols, tol, max_pivots)

        if tableau[-1, -1] < -tol * max(1.0, float(np.abs(g).max())):
            raise LpInfeasibleError("Constraints have no feasible point")

        keep = np.ones(tableau.shape[0], dtype=bool)
        for row in range(n_rows):
            if basis[row] < n_struct:
                continue
            entries = np.flatnonzero(np.abs(tableau[row, :n_struct]) > tol)
            if entries.size:
                _pivot(tableau, basis, row, int(entries[0]))
            else:
                keep[row] = False  # redundant row

        kept_rows = np.flatnonzero(keep[:-1])
        basis = basis[kept_rows]
        tableau = np.vstack([tableau[kept_rows], tableau[-1:]])
        tableau = np.hstack([tableau[:, :n_struct], tableau[:, -1:]])

    phase_two = np.concatenate([c, -c, np.zeros(n_rows)])
    _set_objective(tableau, basis, phase_two)
    pivots = _run_simplex(tableau, basis, n_struct, tol, max_pivots)

    y = np.zeros(n_struct)
    y[basis] = tableau[:-1, -1]
    z = y[:n] - y[n : 2 * n]
    value = float(c @ z)
    logger.debug(f"LP solved: {n_rows} rows, {pivots} pivots, value {value:.6g}")
    return LpSolution(value=value, argmax=z)
