"""Linear time-invariant models used by the power governor."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from src.utils.errors import LinearModelError
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Pressure regulated plant linearized at 7 kW and 3.5 bar.
# States: H2 pressure [bar], H2 outlet flow [Nm³/h], scaled PI integrator [Nm³/h]
# Input: electrical power [kW], output: H2 pressure [bar]; all as deviations.
DEFAULT_A = ((0.0, -0.363, 0.0), (0.927, -1.0, 1.0), (0.063, 0.0, 0.0))
DEFAULT_B = ((0.073,), (0.0,), (0.0,))
DEFAULT_C = ((1.0, 0.0, 0.0),)
DEFAULT_D = ((0.0,),)
DEFAULT_STATE_LABELS = ("p_H2 [bar]", "W_H2_out [Nm3/h]", "K_i*q [Nm3/h]")


def _matrix(value: object, name: str) -> np.ndarray:
    try:
        m = np.atleast_2d(np.array(value, dtype=float))
    except (TypeError, ValueError) as e:
        raise LinearModelError(f"{name} is not a numeric matrix: {e}") from e
    if m.ndim != 2:
        raise LinearModelError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinearModelError(f"{name} has non-finite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class LtiModel:
    """State-space model x⁺ = A x + B v (or ẋ = A x + B v), y = C x + D v.

    ``ts`` is ``None`` for continuous time and the sampling period otherwise.
    States, input and output are deviations from the model's operating point.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    ts: Optional[float] = None
    state_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _matrix(getattr(self, name), name.upper()))
        n = self.a.shape[0]
        if self.a.shape != (n, n):
            raise LinearModelError(f"A must be square, got shape {self.a.shape}")
        if self.b.shape[0] != n:
            raise LinearModelError(f"B needs {n} rows, got shape {self.b.shape}")
        if self.c.shape[1] != n:
            raise LinearModelError(f"C needs {n} columns, got shape {self.c.shape}")
        if self.d.shape != (self.c.shape[0], self.b.shape[1]):
            raise LinearModelError(f"D has shape {self.d.shape}, expected {(self.c.shape[0], self.b.shape[1])}")
        if self.ts is not None and not self.ts > 0:
            raise LinearModelError(f"Sampling period must be positive, got {self.ts}")

    @property
    def n_states(self) -> int:
        return self.a.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.b.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.c.shape[0]

    @property
    def is_discrete(self) -> bool:
        return self.ts is not None

    def digest(self) -> str:
        """Content hash of the matrices and sampling period."""
        h = hashlib.sha256()
        for m in (self.a, self.b, self.c, self.d):
            h.update(repr(m.shape).encode())
            h.update(np.ascontiguousarray(m, dtype="<f8").tobytes())
        h.update(repr(self.ts).encode())
        return h.hexdigest()


def default_linear_model() -> LtiModel:
    """Continuous-time closed-loop pressure model at the nominal point."""
    return LtiModel(DEFAULT_A, DEFAULT_B, DEFAULT_C, DEFAULT_D, state_labels=DEFAULT_STATE_LABELS)


def discretize_zoh(model: LtiModel, ts: float) -> LtiModel:
    """Zero-order-hold discretization via the augmented matrix exponential.

    Args:
        model (LtiModel): Continuous-time model.
        ts (float): Sampling period, s.

    Returns:
        LtiModel: The discrete-time model with ``ts`` set.

    Raises:
        LinearModelError: If the model is already discrete or ``ts`` is not positive.
    """
    if model.is_discrete:
        raise LinearModelError("Model is already discrete")
    if not ts > 0:
        raise LinearModelError(f"Sampling period must be positive, got {ts}")

    n, m = model.n_states, model.n_inputs
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = model.a
    aug[:n, n:] = model.b
    phi = expm(aug * ts)
    return LtiModel(
        phi[:n, :n],
        phi[:n, n:],
        model.c.copy(),
        model.d.copy(),
        ts=ts,
        state_labels=model.state_labels,
    )


def spectral_radius(a: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def is_schur(model: LtiModel) -> bool:
    """All eigenvalues strictly inside the unit circle."""
    return spectral_radius(model.a) < 1.0


def observability_rank(model: LtiModel) -> int:
    n = model.n_states
    blocks = [model.c]
    for _ in range(n - 1):
        blocks.append(blocks[-1] @ model.a)
    return int(np.linalg.matrix_rank(np.vstack(blocks)))


def require_governor_ready(model: LtiModel) -> None:
    """Check a model can back an admissible set: discrete, Schur and observable.

    Raises:
        LinearModelError: If any of the three conditions fails.
    """
    if not model.is_discrete:
        raise LinearModelError("Admissible sets need a discrete-time model")
    rho = spectral_radius(model.a)
    if not rho < 1.0:
        logger.error(f"Model is not Schur stable, spectral radius {rho:.6f}")
        raise LinearModelError(f"Model is not Schur stable, spectral radius {rho:.6f}")
    rank = observability_rank(model)
    if rank < model.n_states:
        logger.error(f"Model is not observable, rank {rank} < {model.n_states}")
        raise LinearModelError(f"Model is not observable from its output, rank {rank} < {model.n_states}")
