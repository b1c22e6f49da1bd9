"""Electrolyzer parameter set: JSON schema, validation and canonical emission.

Parameter documents are JSON objects with one object per section. Every key has
a canonical SI spelling which is what ``emit_params`` writes; a few keys also
accept an alternate unit (``t_el_celsius``, ``p_h2_ref_bar``, ...) that is
converted on load. Giving both spellings of one key is an error, as is any key
the schema does not know.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Optional

from runtime.paths import default_params_path
from src.core.units import bar_to_pa, celsius_to_kelvin, kw_to_w
from src.utils.constants import PARAMS_FORMAT, PARAMS_VERSION
from src.utils.errors import ParameterError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DOCUMENT_KEY = "<document>"
TEMPERATURE_CHOICES = ("celsius", "kelvin")
LOG_BASE_CHOICES = ("e", "10")

REQUIRED = object()


@dataclass(frozen=True)
class ParamSpec:
    """Schema entry for a single configuration key."""

    field: str
    section: str
    key: str
    kind: str = "float"
    default: Any = REQUIRED
    alternates: tuple[tuple[str, Callable[[float], float]], ...] = ()
    choices: tuple[str, ...] = ()

    @property
    def dotted(self) -> str:
        return f"{self.section}.{self.key}"

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


SCHEMA: tuple[ParamSpec, ...] = (
    # thermodynamics
    ParamSpec("r_o2", "thermodynamics", "r_o2_j_per_kg_k"),
    ParamSpec("r_h2", "thermodynamics", "r_h2_j_per_kg_k"),
    ParamSpec("gamma", "thermodynamics", "gamma"),
    ParamSpec("faraday", "thermodynamics", "faraday_c_per_mol"),
    ParamSpec("m_h2", "thermodynamics", "m_h2_kg_per_mol", default=2.016e-3),
    ParamSpec("m_o2", "thermodynamics", "m_o2_kg_per_mol", default=31.998e-3),
    # electrolyzer
    ParamSpec("v_an", "electrolyzer", "v_an_m3"),
    ParamSpec("v_ca", "electrolyzer", "v_ca_m3"),
    ParamSpec("tau_ca", "electrolyzer", "tau_ca_s"),
    ParamSpec("c_d", "electrolyzer", "c_d"),
    ParamSpec("a_t", "electrolyzer", "a_t_m2"),
    ParamSpec("n_cell", "electrolyzer", "n_cell", kind="int"),
    ParamSpec("a_cell", "electrolyzer", "a_cell_m2"),
    ParamSpec(
        "t_el",
        "electrolyzer",
        "t_el_kelvin",
        alternates=(("t_el_celsius", celsius_to_kelvin),),
    ),
    # controllers
    ParamSpec("kp_ca", "controllers", "kp_ca_nm3h_per_bar"),
    ParamSpec("ki_ca", "controllers", "ki_ca_nm3h_per_bar_s"),
    ParamSpec("kp_an", "controllers", "kp_an_per_bar", default=-15.0),
    # polarization curve
    ParamSpec("r1", "polarization", "r1"),
    ParamSpec("r2", "polarization", "r2"),
    ParamSpec("s1", "polarization", "s1"),
    ParamSpec("s2", "polarization", "s2"),
    ParamSpec("s3", "polarization", "s3"),
    ParamSpec("t1", "polarization", "t1"),
    ParamSpec("t2", "polarization", "t2"),
    ParamSpec("t3", "polarization", "t3"),
    ParamSpec(
        "coefficient_temperature",
        "polarization",
        "coefficient_temperature",
        kind="str",
        default="celsius",
        choices=TEMPERATURE_CHOICES,
    ),
    ParamSpec(
        "log_base",
        "polarization",
        "log_base",
        kind="str",
        default="e",
        choices=LOG_BASE_CHOICES,
    ),
    # faraday efficiency
    ParamSpec("a1", "faraday", "a1"),
    ParamSpec("a2", "faraday", "a2"),
    ParamSpec("a3", "faraday", "a3"),
    ParamSpec("a4", "faraday", "a4"),
    ParamSpec("a5", "faraday", "a5"),
    # operating envelope
    ParamSpec(
        "p_h2_ref",
        "operation",
        "p_h2_ref_pa",
        alternates=(("p_h2_ref_bar", bar_to_pa),),
    ),
    ParamSpec("p_min", "operation", "p_min_pa", alternates=(("p_min_bar", bar_to_pa),)),
    ParamSpec("p_max", "operation", "p_max_pa", alternates=(("p_max_bar", bar_to_pa),)),
    ParamSpec(
        "nominal_power",
        "operation",
        "nominal_power_w",
        default=7000.0,
        alternates=(("nominal_power_kw", kw_to_w),),
    ),
    # governor
    ParamSpec("governor_period", "governor", "period_s", default=0.1),
    ParamSpec(
        "epsilon",
        "governor",
        "epsilon_pa",
        default=1000.0,
        alternates=(("epsilon_bar", bar_to_pa),),
    ),
    ParamSpec(
        "mismatch_margin",
        "governor",
        "mismatch_margin_pa",
        default=5000.0,
        alternates=(("mismatch_margin_bar", bar_to_pa),),
    ),
    ParamSpec("horizon_cap", "governor", "horizon_cap", kind="int", default=1000),
    ParamSpec("lpf_tau", "governor", "lpf_tau_s", default=14.5),
    # integration and solver settings
    ParamSpec("substep", "simulation", "substep_s", default=0.01),
    ParamSpec(
        "current_density_max",
        "simulation",
        "current_density_max_a_per_m2",
        default=4000.0,
    ),
    ParamSpec("solver_rtol", "simulation", "solver_rtol", default=1e-6),
    ParamSpec("solver_max_iter", "simulation", "solver_max_iter", kind="int", default=200),
    # scenario levels
    ParamSpec(
        "large_step_low",
        "scenarios",
        "large_step_low_w",
        default=3000.0,
        alternates=(("large_step_low_kw", kw_to_w),),
    ),
    ParamSpec(
        "large_step_high",
        "scenarios",
        "large_step_high_w",
        default=14000.0,
        alternates=(("large_step_high_kw", kw_to_w),),
    ),
    ParamSpec(
        "small_steps_levels",
        "scenarios",
        "small_steps_levels_w",
        kind="levels",
        default=(7000.0, 8000.0, 9000.0, 10000.0, 9000.0, 8000.0, 7000.0),
        alternates=(("small_steps_levels_kw", kw_to_w),),
    ),
    ParamSpec(
        "constant_level",
        "scenarios",
        "constant_level_w",
        default=7000.0,
        alternates=(("constant_level_kw", kw_to_w),),
    ),
)

SECTIONS: tuple[str, ...] = tuple(dict.fromkeys(spec.section for spec in SCHEMA))
_SPEC_BY_FIELD = {spec.field: spec for spec in SCHEMA}

_POSITIVE_FIELDS = (
    "r_o2",
    "r_h2",
    "faraday",
    "m_h2",
    "m_o2",
    "v_an",
    "v_ca",
    "tau_ca",
    "c_d",
    "a_t",
    "a_cell",
    "t_el",
    "p_h2_ref",
    "p_min",
    "p_max",
    "nominal_power",
    "governor_period",
    "epsilon",
    "lpf_tau",
    "substep",
    "current_density_max",
    "solver_rtol",
)


@dataclass(frozen=True)
class ParamSet:
    """Validated electrolyzer parameters, SI units throughout.

    Controller gains keep the units they are quoted in: ``kp_ca`` in
    Nm³/(h·bar), ``ki_ca`` in Nm³/(h·bar·s) and ``kp_an`` in 1/bar.
    Polarization and Faraday coefficients are dimensionless numbers whose
    temperature argument is selected by ``coefficient_temperature``.
    """

    r_o2: float
    r_h2: float
    gamma: float
    faraday: float
    m_h2: float
    m_o2: float
    v_an: float
    v_ca: float
    tau_ca: float
    c_d: float
    a_t: float
    n_cell: int
    a_cell: float
    t_el: float
    kp_ca: float
    ki_ca: float
    kp_an: float
    r1: float
    r2: float
    s1: float
    s2: float
    s3: float
    t1: float
    t2: float
    t3: float
    coefficient_temperature: str
    log_base: str
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    p_h2_ref: float
    p_min: float
    p_max: float
    nominal_power: float
    governor_period: float
    epsilon: float
    mismatch_margin: float
    horizon_cap: int
    lpf_tau: float
    substep: float
    current_density_max: float
    solver_rtol: float
    solver_max_iter: int
    large_step_low: float
    large_step_high: float
    small_steps_levels: tuple[float, ...]
    constant_level: float

    def __post_init__(self) -> None:
        _validate(self)

    @property
    def substeps_per_period(self) -> int:
        """Number of integration substeps in one governor period."""
        return int(round(self.governor_period / self.substep))

    def digest(self) -> str:
        """SHA-256 of the canonical parameter document."""
        return hashlib.sha256(emit_params(self).encode("utf-8")).hexdigest()


def _fail(field: str, message: str) -> None:
    raise ParameterError(_SPEC_BY_FIELD[field].dotted, message)


def _validate(p: ParamSet) -> None:
    """Check the cross-field rules a parameter set must satisfy.

    Raises:
        ParameterError: Naming the first offending key.
    """
    for spec in SCHEMA:
        value = getattr(p, spec.field)
        if spec.kind == "float" and not math.isfinite(value):
            _fail(spec.field, f"must be finite, got {value}")
        if spec.kind == "str" and value not in spec.choices:
            _fail(spec.field, f"must be one of {', '.join(spec.choices)}, got {value!r}")

    for name in _POSITIVE_FIELDS:
        if not getattr(p, name) > 0:
            _fail(name, f"must be positive, got {getattr(p, name)}")

    if not p.gamma > 1:
        _fail("gamma", f"must exceed 1, got {p.gamma}")
    if p.n_cell < 1:
        _fail("n_cell", f"must be at least 1, got {p.n_cell}")
    if p.ki_ca == 0:
        _fail("ki_ca", "must be non-zero")
    if not p.kp_an < 0:
        _fail("kp_an", f"must be negative so the exhaust valve opens as p_O2 rises, got {p.kp_an}")
    if not 0 < p.a1 <= 1:
        _fail("a1", f"must lie in (0, 1], got {p.a1}")
    if not p.p_min < p.p_h2_ref:
        _fail("p_min", "must be below the hydrogen pressure reference")
    if not p.p_h2_ref < p.p_max:
        _fail("p_max", "must be above the hydrogen pressure reference")
    if p.epsilon >= min(p.p_max - p.p_h2_ref, p.p_h2_ref - p.p_min):
        _fail("epsilon", "must be smaller than the distance from the reference to either bound")
    if not p.mismatch_margin >= 0:
        _fail("mismatch_margin", f"must not be negative, got {p.mismatch_margin}")
    if p.epsilon + p.mismatch_margin >= min(p.p_max - p.p_h2_ref, p.p_h2_ref - p.p_min):
        _fail("mismatch_margin", "leaves no room between the tightened bounds and the reference")
    if p.horizon_cap < 1:
        _fail("horizon_cap", f"must be at least 1, got {p.horizon_cap}")
    if p.solver_max_iter < 1:
        _fail("solver_max_iter", f"must be at least 1, got {p.solver_max_iter}")

    ratio = p.governor_period / p.substep
    if p.substep > p.governor_period or abs(ratio - round(ratio)) > 1e-9 * ratio:
        _fail("substep", "must divide the governor period into a whole number of steps")

    for name in ("large_step_low", "large_step_high", "constant_level"):
        if not getattr(p, name) >= 0:
            _fail(name, "must not be negative")
    levels = p.small_steps_levels
    if len(levels) < 3 or len(levels) % 2 == 0:
        _fail("small_steps_levels", "needs an odd number of levels, at least three")
    if any(not math.isfinite(level) or level < 0 for level in levels):
        _fail("small_steps_levels", "levels must be finite and not negative")


def _coerce(spec: ParamSpec, dotted: str, raw: Any) -> Any:
    if spec.kind == "str":
        if not isinstance(raw, str):
            raise ParameterError(dotted, f"expected a string, got {raw!r}")
        return raw

    if spec.kind == "levels":
        if not isinstance(raw, list):
            raise ParameterError(dotted, f"expected a list of numbers, got {raw!r}")
        return tuple(_coerce_number(dotted, item) for item in raw)

    value = _coerce_number(dotted, raw)
    if spec.kind == "int":
        if not value.is_integer():
            raise ParameterError(dotted, f"expected an integer, got {raw!r}")
        return int(value)
    return value


def _coerce_number(dotted: str, raw: Any) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ParameterError(dotted, f"expected a number, got {raw!r}")
    return float(raw)


def _convert(spec: ParamSpec, value: Any, converter: Callable[[float], float]) -> Any:
    if spec.kind == "levels":
        return tuple(converter(v) for v in value)
    return converter(value)


def load_params(config_text: str) -> ParamSet:
    """Parse and validate a JSON parameter document.

    Args:
        config_text (str): The document text.

    Returns:
        ParamSet: The validated parameter set.

    Raises:
        ParameterError: If the document is malformed, a required key is
            missing, a key is unknown or duplicated, or a value is out of range.
    """
    try:
        doc = json.loads(config_text)
    except json.JSONDecodeError as e:
        raise ParameterError(DOCUMENT_KEY, f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ParameterError(DOCUMENT_KEY, "expected a JSON object")

    if doc.get("format", PARAMS_FORMAT) != PARAMS_FORMAT:
        raise ParameterError("format", f"expected {PARAMS_FORMAT!r}, got {doc['format']!r}")
    if doc.get("version", PARAMS_VERSION) != PARAMS_VERSION:
        raise ParameterError("version", f"unsupported version {doc['version']!r}")

    for name in doc:
        if name not in SECTIONS and name not in ("format", "version"):
            raise ParameterError(name, "unknown section")

    values: dict[str, Any] = {}
    for section in SECTIONS:
        body = doc.get(section, {})
        if not isinstance(body, dict):
            raise ParameterError(section, "section must be a JSON object")

        specs = [spec for spec in SCHEMA if spec.section == section]
        known = {spec.key for spec in specs}
        known.update(alt for spec in specs for alt, _ in spec.alternates)
        for key in body:
            if key not in known:
                raise ParameterError(f"{section}.{key}", "unknown key")

        for spec in specs:
            spellings = [(spec.key, None), *spec.alternates]
            present = [(key, conv) for key, conv in spellings if key in body]
            if len(present) > 1:
                raise ParameterError(
                    f"{section}.{present[1][0]}",
                    f"given together with {section}.{present[0][0]}",
                )
            if not present:
                if spec.required:
                    raise ParameterError(spec.dotted, "missing required key")
                values[spec.field] = spec.default
                continue

            key, converter = present[0]
            value = _coerce(spec, f"{section}.{key}", body[key])
            if converter is not None:
                value = _convert(spec, value, converter)
            values[spec.field] = value

    params = ParamSet(**values)
    logger.debug(f"Loaded parameter set {params.digest()[:12]}")
    return params


def emit_params(params: ParamSet) -> str:
    """Write the canonical document for a parameter set.

    Only canonical SI keys are written, in schema order, so the output is
    deterministic and ``load_params(emit_params(p)) == p``.

    Args:
        params (ParamSet): The parameter set.

    Returns:
        str: The JSON document.
    """
    doc: dict[str, Any] = {"format": PARAMS_FORMAT, "version": PARAMS_VERSION}
    for spec in SCHEMA:
        value = getattr(params, spec.field)
        doc.setdefault(spec.section, {})[spec.key] = (
            list(value) if spec.kind == "levels" else value
        )
    return json.dumps(doc, indent=2) + "\n"


def load_params_file(path: Path) -> ParamSet:
    """Load a parameter document from disk.

    Raises:
        ParameterError: If the file cannot be read or fails validation.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read parameter file {path}: {e}")
        raise ParameterError(DOCUMENT_KEY, f"cannot read {path}: {e}") from e
    return load_params(text)


@lru_cache(maxsize=1)
def load_default_params() -> ParamSet:
    """Load the shipped parameter document."""
    return load_params_file(default_params_path())


def resolve_params(path: Optional[Path]) -> ParamSet:
    """Load parameters from a file when given, the shipped defaults otherwise."""
    return load_params_file(path) if path is not None else load_default_params()


def field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(ParamSet))
