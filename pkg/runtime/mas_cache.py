"""Module to manage the cached admissible set of the power governor"""

from pathlib import Path
from typing import Optional

from src.core.lti import LtiModel
from src.core.mas import AdmissibleSet, build_mas, load_admissible_set, save_admissible_set
from src.utils.errors import AdmissibleSetFormatError
from src.utils.logger import get_logger
from src.utils.paths import mas_cache

logger = get_logger(__name__)


def _matches(
    omega: AdmissibleSet,
    model: LtiModel,
    y_upper: float,
    y_lower: Optional[float],
    epsilon: float,
) -> bool:
    return (
        omega.model_digest == model.digest()
        and omega.y_upper == y_upper
        and omega.y_lower == y_lower
        and omega.epsilon == epsilon
    )


def ensure_admissible_set(
    model: LtiModel,
    y_upper: float,
    y_lower: Optional[float],
    epsilon: float,
    horizon_cap: int = 1000,
    path: Optional[Path] = None,
) -> AdmissibleSet:
    """Load the cached admissible set, rebuilding it when missing or stale

    Args:
        model (LtiModel): Discrete model the set must belong to.
        y_upper (float): Upper output bound.
        y_lower (Optional[float]): Lower output bound.
        epsilon (float): Steady-state tightening.
        horizon_cap (int): Horizon cap used when rebuilding.
        path (Optional[Path]): Cache file, defaults to the user data directory.

    Returns:
        AdmissibleSet: A set built for exactly this model and these bounds.
    """
    path = Path(path) if path is not None else mas_cache

    if path.exists():
        try:
            omega = load_admissible_set(path)
        except AdmissibleSetFormatError as e:
            logger.warning(f"Discarding unreadable admissible set cache {path}: {e}")
        else:
            if _matches(omega, model, y_upper, y_lower, epsilon):
                logger.debug(f"Using cached admissible set from {path}")
                return omega
            logger.info(f"Cached admissible set at {path} is stale, rebuilding")

    omega = build_mas(model, y_upper, y_lower, epsilon, horizon_cap)
    save_admissible_set(omega, path)
    return omega
