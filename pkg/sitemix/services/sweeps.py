"""
Sweep Service

Tabulates the closed forms over a 1-D grid (the published figures are
presets) and evaluates single points.
"""

# Standard Library
import logging
import os
import tempfile
from typing import Callable, Dict, List, Mapping, Optional

# Third Party
import numpy as np

# sitemix
from sitemix import analytic, constants
from sitemix.models import BcsParams, NagaokaParams, ParameterDomainError, SweepSpec

logger = logging.getLogger(__name__)

UNIT_GRID = (0.0, 1.0, 101)

PRESETS = {
    constants.PRESET_FIG1: (constants.FAMILY_GUTZWILLER, {"n": (1.0, 0.75, 0.5, 0.25)}),
    constants.PRESET_FIG2: (
        constants.FAMILY_BCS_EPSILON,
        {"n": (1.0, 1.0, 0.5, 0.5), "omega_ef": (0.1, 0.2, 0.1, 0.2)},
    ),
    constants.PRESET_FIG3: (
        constants.FAMILY_BCS_CONCURRENCE,
        {"n": (1.0, 0.75, 1.0, 0.75), "omega_ef": (0.5, 0.5, 0.75, 0.75)},
    ),
}


def format_number(value: float) -> str:
    """Full double precision with a '.' separator whatever the locale"""
    return format(float(value), ".17g")


def _label(value: float) -> str:
    return format(float(value), "g")


def preset_spec(name: str, output: Optional[str] = None, fmt: str = constants.FORMAT_CSV) -> SweepSpec:
    """SweepSpec reproducing one of the published figures"""
    if name not in PRESETS:
        raise ParameterDomainError(f"Unknown preset {name!r}")
    family, fixed = PRESETS[name]
    return SweepSpec(family=family, grid=UNIT_GRID, fixed=fixed, output=output, format=fmt)


# Column builders: each returns (header names, one function per column)


def _gutzwiller_columns(spec: SweepSpec):
    curves = spec.curves("n")
    headers = [f"eps_n{_label(curve['n'])}" for curve in curves]
    columns = [lambda g, n=curve["n"]: analytic.gutzwiller_epsilon(g, n) for curve in curves]
    return headers, columns


def _bcs_columns(spec: SweepSpec, prefix: str, quantity: Callable[[BcsParams], float]):
    curves = spec.curves("n", "omega_ef")
    headers = [f"{prefix}_n{_label(curve['n'])}_w{_label(curve['omega_ef'])}" for curve in curves]
    columns = [
        lambda ratio, n=curve["n"], w=curve["omega_ef"]: quantity(
            BcsParams.from_ratios(n=n, omega_ef=w, delta_ratio=ratio)
        )
        for curve in curves
    ]
    return headers, columns


def _nagaoka_value(l: float, N: int, field: str) -> float:
    if l > N - 1:
        return float("nan")
    values = analytic.nagaoka_epsilon(NagaokaParams(N=N, l=int(l)))
    return getattr(values, field)


def _nagaoka_columns(spec: SweepSpec):
    headers = []
    columns = []
    for curve in spec.curves("N"):
        N = curve["N"]
        if int(N) != N:
            raise ParameterDomainError(f"Site count N={N!r} must be an integer")
        N = int(N)
        headers += [f"eps_N{N}", f"paper_N{N}"]
        columns += [
            lambda l, N=N: _nagaoka_value(l, N, "direct"),
            lambda l, N=N: _nagaoka_value(l, N, "paper_form"),
        ]
    return headers, columns


def sweep_columns(spec: SweepSpec):
    if spec.family == constants.FAMILY_GUTZWILLER:
        return _gutzwiller_columns(spec)
    if spec.family == constants.FAMILY_BCS_EPSILON:
        return _bcs_columns(spec, "eps", analytic.bcs_epsilon)
    if spec.family == constants.FAMILY_BCS_CONCURRENCE:
        return _bcs_columns(spec, "C", analytic.bcs_concurrence)
    return _nagaoka_columns(spec)


def _grid(spec: SweepSpec) -> np.ndarray:
    values = spec.grid_values()
    if spec.family == constants.FAMILY_NAGAOKA:
        rounded = np.round(values)
        if np.any(np.abs(values - rounded) > 1e-9) or rounded[0] < 0:
            raise ParameterDomainError(f"Nagaoka sweeps need nonnegative integer l values, got grid {spec.grid!r}")
        values = rounded
    return values


def render_sweep(spec: SweepSpec) -> str:
    """
    The sweep as text: a header row, then one row per grid point

    Raises:
        ParameterDomainError: if any grid point leaves a formula's domain;
            nothing is rendered in that case
    """
    headers, columns = sweep_columns(spec)
    delimiter = constants.FORMAT_DELIMITERS[spec.format]
    lines = [delimiter.join([spec.variable] + headers)]
    for x in _grid(spec):
        x = float(x)
        row = [format_number(x)]
        for column in columns:
            row.append(format_number(column(x)))
        lines.append(delimiter.join(row))
    return "\n".join(lines) + "\n"


def _default_file_mode() -> int:
    umask = os.umask(0)
    os.umask(umask)
    return 0o666 & ~umask


def write_atomic(path: str, text: str) -> None:
    """
    Write through a temporary file in the target directory, renamed into place on success

    The result gets the mode a plain open() would give it, not mkstemp's 0600.
    """
    directory = os.path.dirname(os.path.abspath(path))
    handle, temporary = tempfile.mkstemp(prefix=".sitemix-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)
        os.chmod(temporary, _default_file_mode())
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise


def run_sweep(spec: SweepSpec) -> str:
    """
    Render a sweep and, when spec.output is set, write it there

    Returns the rendered text either way.
    """
    text = render_sweep(spec)
    logger.info(
        f"[Sweep] {spec.family}: {int(spec.grid[2])} points over {spec.variable} in "
        f"[{spec.grid[0]!r}, {spec.grid[1]!r}]"
    )
    if spec.output:
        write_atomic(spec.output, text)
        logger.info(f"[Sweep] Wrote {spec.output}")
    return text


# Single points


def _require(params: Mapping[str, str], *names: str) -> None:
    missing = [name for name in names if name not in params]
    if missing:
        raise ParameterDomainError(f"Missing parameter(s): {', '.join(missing)}")
    unknown = sorted(set(params) - set(names))
    if unknown:
        raise ParameterDomainError(f"Unknown parameter(s): {', '.join(unknown)}")


def _float(params: Mapping[str, str], name: str) -> float:
    try:
        return float(params[name])
    except ValueError:
        raise ParameterDomainError(f"Parameter {name}={params[name]!r} is not a number")


def _int(params: Mapping[str, str], name: str) -> int:
    try:
        return int(params[name])
    except ValueError:
        raise ParameterDomainError(f"Parameter {name}={params[name]!r} is not an integer")


def _bcs_from(params: Mapping[str, str]) -> BcsParams:
    _require(params, "n", "omega_ef", "delta_ratio")
    return BcsParams.from_ratios(
        n=_float(params, "n"),
        omega_ef=_float(params, "omega_ef"),
        delta_ratio=_float(params, "delta_ratio"),
    )


def eval_point(family: str, params: Mapping[str, str]) -> Dict[str, Optional[float]]:
    """
    Evaluate one analytic quantity

    Args:
        family: one of constants.EVAL_FAMILY_CHOICES
        params: raw name -> value strings

    Returns:
        ordered name -> value; None marks a quantity that does not exist
        (a concurrence onset that is never reached)

    Raises:
        ParameterDomainError: for unknown families, missing or unknown
            parameters and out-of-domain values
    """
    if family == constants.EVAL_GUTZWILLER_D:
        _require(params, "g", "n")
        return {"d": analytic.gutzwiller_d(_float(params, "g"), _float(params, "n"))}

    if family == constants.EVAL_GUTZWILLER:
        _require(params, "g", "n")
        density = analytic.gutzwiller_params(_float(params, "g"), _float(params, "n"))
        return {"d": density.d, "epsilon": analytic.epsilon(analytic.site_rdm(density))}

    if family == constants.EVAL_METALLIC:
        _require(params, "n")
        return {"epsilon": analytic.metallic_epsilon(_float(params, "n"))}

    if family == constants.EVAL_BCS_ZETA:
        return {"zeta": analytic.bcs_zeta(_bcs_from(params))}

    if family in (constants.EVAL_BCS_EPSILON, constants.EVAL_BCS_CONCURRENCE):
        density = analytic.bcs_params(_bcs_from(params))
        values = {"zeta": density.zeta, "d": density.d}
        if family == constants.EVAL_BCS_EPSILON:
            values["epsilon"] = analytic.epsilon(analytic.site_rdm(density))
        else:
            values["C"] = analytic.concurrence_x(density.n, density.d, density.zeta)
        return values

    if family == constants.EVAL_BCS_ONSET:
        _require(params, "n", "omega_ef")
        return {"delta_ratio": analytic.concurrence_onset(_float(params, "n"), _float(params, "omega_ef"))}

    if family == constants.EVAL_NAGAOKA:
        _require(params, "N", "l")
        values = analytic.nagaoka_epsilon(NagaokaParams(N=_int(params, "N"), l=_int(params, "l")))
        return {"direct": values.direct, "paper_form": values.paper_form, "discrepancy": values.discrepancy}

    if family == constants.EVAL_CLASS_MAX:
        _require(params, "kind")
        return {"epsilon": analytic.class_maximum(params["kind"])}

    raise ParameterDomainError(f"Unknown eval family {family!r}")


POINT_SEPARATORS = {
    constants.FORMAT_CSV: "=",
    constants.FORMAT_TSV: "\t",
}


def render_point(values: Mapping[str, Optional[float]], fmt: str = constants.FORMAT_CSV) -> List[str]:
    """`name=value` lines; tsv separates name and value with a tab instead"""
    separator = POINT_SEPARATORS[fmt]
    return [
        f"{name}{separator}{'none' if value is None else format_number(value)}" for name, value in values.items()
    ]
