"""Maximal output admissible set for constant commands.

The set collects every (x, v) such that holding the command v forever from
state x keeps the model output inside its bounds. It is built row block by
row block over the prediction horizon, stopping as soon as the next block is
implied by the rows gathered so far. A tightened steady-state block keeps the
set finitely determined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.core.lp import lp_max
from src.core.lti import LtiModel, require_governor_ready
from src.utils.constants import ADMISSIBLE_SET_FORMAT, ADMISSIBLE_SET_VERSION
from src.utils.errors import (
    AdmissibleSetFormatError,
    LinearModelError,
    LpUnboundedError,
    MasDeterminationError,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

IMPLICATION_TOL = 1e-9
SNAP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AdmissibleSet:
    """Polyhedron ``Hx x + Hv v <= h`` in model deviation coordinates.

    Attributes:
        hx: State coefficients, N×n.
        hv: Command coefficients, N×m.
        h: Bounds, length N.
        j_star: Last prediction step included.
        epsilon: Steady-state tightening, output units.
        y_upper: Upper output bound.
        y_lower: Lower output bound, ``None`` when one-sided.
        model_digest: Digest of the discrete model the set was built for.
    """

    hx: np.ndarray
    hv: np.ndarray
    h: np.ndarray
    j_star: int
    epsilon: float
    y_upper: float
    y_lower: Optional[float]
    model_digest: str

    def __post_init__(self) -> None:
        hx = np.atleast_2d(np.asarray(self.hx, dtype=float))
        hv = np.asarray(self.hv, dtype=float).reshape(hx.shape[0], -1)
        h = np.asarray(self.h, dtype=float).ravel()
        if h.size != hx.shape[0]:
            raise LinearModelError(f"Row count mismatch: {hx.shape[0]} rows but {h.size} bounds")
        for name, value in (("hx", hx), ("hv", hv), ("h", h)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def rows(self) -> int:
        return self.h.size

    @property
    def n_states(self) -> int:
        return self.hx.shape[1]

    @cached_property
    def normalized(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Rows scaled to unit norm, so tolerances do not depend on row scaling."""
        norms = np.linalg.norm(np.hstack([self.hx, self.hv]), axis=1)
        norms[norms == 0.0] = 1.0
        return self.hx / norms[:, None], self.hv / norms[:, None], self.h / norms

    def margins(self, x: np.ndarray, v: np.ndarray | float) -> np.ndarray:
        """``h - Hx x - Hv v`` per row; negative entries are violated rows."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        return self.h - self.hx @ np.asarray(x, dtype=float) - self.hv @ v

    def contains(self, x: np.ndarray, v: np.ndarray | float, tol: float = 0.0) -> bool:
        return bool(np.all(self.margins(x, v) >= -tol))


def _output_selector(n_outputs: int, two_sided: bool) -> np.ndarray:
    eye = np.eye(n_outputs)
    return np.vstack([eye, -eye]) if two_sided else eye


def _bounds(n_outputs: int, y_upper: float, y_lower: Optional[float]) -> np.ndarray:
    upper = np.full(n_outputs, float(y_upper))
    if y_lower is None:
        return upper
    return np.concatenate([upper, np.full(n_outputs, -float(y_lower))])


def _implied(G: np.ndarray, g: np.ndarray, row: np.ndarray, bound: float) -> bool:
    try:
        value, _ = lp_max(row, G, g)
    except LpUnboundedError:
        return False
    return value <= bound + IMPLICATION_TOL * max(1.0, abs(bound))


def build_mas(
    model: LtiModel,
    y_upper: float,
    y_lower: Optional[float],
    epsilon: float,
    horizon_cap: int = 1000,
) -> AdmissibleSet:
    """Build the finitely determined admissible set of a discrete model.

    Rows are the tightened steady-state block followed by one block per
    prediction step ``j = 0..j*``; prediction step ``j`` with a constant
    command v reads ``C A^j x + (C S_j B + D) v`` where ``S_j = Σ_{k<j} A^k``.

    Args:
        model (LtiModel): Discrete, Schur stable and observable model.
        y_upper (float): Upper output bound.
        y_lower (Optional[float]): Lower output bound, ``None`` for one-sided.
        epsilon (float): Steady-state tightening, must be positive.
        horizon_cap (int): Largest horizon to try.

    Returns:
        AdmissibleSet: The constructed set.

    Raises:
        LinearModelError: If the model is not usable or the bounds are inconsistent.
        MasDeterminationError: If no finite horizon is found within the cap.
    """
    require_governor_ready(model)
    if not epsilon > 0:
        raise LinearModelError(f"Tightening must be positive, got {epsilon}")
    if y_lower is not None and not y_lower + epsilon < y_upper - epsilon:
        raise LinearModelError("Output bounds leave no room after tightening")

    a, b, c, d = model.a, model.b, model.c, model.d
    n = model.n_states
    selector = _output_selector(model.n_outputs, y_lower is not None)
    bounds = _bounds(model.n_outputs, y_upper, y_lower)

    dc_gain = c @ np.linalg.solve(np.eye(n) - a, b) + d
    hv_ss = selector @ dc_gain
    hv_ss[np.abs(hv_ss) < SNAP_TOL * max(1.0, float(np.abs(hv_ss).max()))] = 0.0
    hx_blocks = [np.zeros((selector.shape[0], n)), selector @ c]
    hv_blocks = [hv_ss, selector @ d]
    h_blocks = [bounds - epsilon, bounds]

    a_pow = a.copy()  # A^(j+1)
    s_sum = np.eye(n)  # S_(j+1)
    for j in range(horizon_cap):
        G = np.hstack([np.vstack(hx_blocks), np.vstack(hv_blocks)])
        g = np.concatenate(h_blocks)

        next_hx = selector @ c @ a_pow
        next_hv = selector @ (c @ s_sum @ b + d)
        candidates = np.hstack([next_hx, next_hv])
        if all(_implied(G, g, row, bound) for row, bound in zip(candidates, bounds)):
            omega = AdmissibleSet(
                hx=G[:, :n],
                hv=G[:, n:],
                h=g,
                j_star=j,
                epsilon=float(epsilon),
                y_upper=float(y_upper),
                y_lower=None if y_lower is None else float(y_lower),
                model_digest=model.digest(),
            )
            logger.info(f"Admissible set determined at j*={j} with {omega.rows} rows")
            return omega

        hx_blocks.append(next_hx)
        hv_blocks.append(next_hv)
        h_blocks.append(bounds)
        s_sum = s_sum + a_pow
        a_pow = a_pow @ a

    logger.error(f"Admissible set not determined within {horizon_cap} steps")
    raise MasDeterminationError(f"Admissible set not finitely determined within {horizon_cap} steps")


def admissible_set_to_document(omega: AdmissibleSet) -> dict[str, Any]:
    return {
        "format": ADMISSIBLE_SET_FORMAT,
        "version": ADMISSIBLE_SET_VERSION,
        "model_digest": omega.model_digest,
        "j_star": omega.j_star,
        "epsilon": omega.epsilon,
        "y_upper": omega.y_upper,
        "y_lower": omega.y_lower,
        "n_states": omega.n_states,
        "rows": [
            [*hx_row, *hv_row, h_val]
            for hx_row, hv_row, h_val in zip(omega.hx.tolist(), omega.hv.tolist(), omega.h.tolist())
        ],
    }


def admissible_set_from_document(doc: Any) -> AdmissibleSet:
    """Rebuild an admissible set from its JSON document.

    Raises:
        AdmissibleSetFormatError: If the document is malformed or from another version.
    """
    if not isinstance(doc, dict):
        raise AdmissibleSetFormatError("Admissible set document must be a JSON object")
    if doc.get("format") != ADMISSIBLE_SET_FORMAT:
        raise AdmissibleSetFormatError(f"Unexpected format {doc.get('format')!r}")
    if doc.get("version") != ADMISSIBLE_SET_VERSION:
        raise AdmissibleSetFormatError(f"Unsupported version {doc.get('version')!r}")

    try:
        n = int(doc["n_states"])
        rows = np.array(doc["rows"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] < n + 2:
            raise AdmissibleSetFormatError(f"Rows have shape {rows.shape}, expected N×{n + 2}")
        y_lower = doc["y_lower"]
        return AdmissibleSet(
            hx=rows[:, :n],
            hv=rows[:, n:-1],
            h=rows[:, -1],
            j_star=int(doc["j_star"]),
            epsilon=float(doc["epsilon"]),
            y_upper=float(doc["y_upper"]),
            y_lower=None if y_lower is None else float(y_lower),
            model_digest=str(doc["model_digest"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise AdmissibleSetFormatError(f"Malformed admissible set document: {e}") from e


def save_admissible_set(omega: AdmissibleSet, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(admissible_set_to_document(omega), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Saved admissible set with {omega.rows} rows to {path}")


def load_admissible_set(path: Path) -> AdmissibleSet:
    """Read an admissible set written by ``save_admissible_set``.

    Raises:
        AdmissibleSetFormatError: If the file is missing, not JSON or malformed.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise AdmissibleSetFormatError(f"Cannot read admissible set {path}: {e}") from e
    return admissible_set_from_document(doc)
