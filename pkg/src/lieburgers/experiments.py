"""Config-driven frame-change experiments: L2 error against time for each
scheme in a set of Galilean frames, written as CSV."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .exact import ShockSolution, WavySolution
from .grid import Boundary, Grid1D, SchemeParams, State, l2_error
from .schemes import CANCEL, ConvergenceFailure, OmegaClosure, SchemeId, run
from .stability import check_conditions
from .symmetry import frame_change


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class UnknownKey(ConfigError):
    pass


class MissingKey(ConfigError):
    pass


class ConflictingKeys(ConfigError):
    pass


class NonPositiveValue(ConfigError):
    pass


class InvalidValue(ConfigError):
    pass


_ALIASES = {"t": "t_end", "re": "re_h"}
_KEYS = {"scheme", "ic", "ic.a", "ic.b", "ic.A", "x_min", "length", "n_points",
         "cfl", "re_h", "nu", "t_end", "frames", "omega", "output", "merged"}
_REQUIRED = ("scheme", "ic", "n_points", "cfl", "t_end")
_POSITIVE = ("length", "n_points", "cfl", "re_h", "nu", "t_end", "ic.b")


@dataclass(frozen=True)
class ExperimentConfig:
    schemes: tuple
    ic: str
    x_min: float
    length: float
    n_points: int
    cfl: float
    t_end: float
    nu: float
    solution: object
    frames: tuple = (0.0, 0.25, 0.5)
    omega: OmegaClosure = CANCEL
    output: Optional[str] = None
    merged: bool = True

    @property
    def h(self):
        return self.length / self.n_points

    @property
    def ref_velocity(self):
        """``a = max |u0|`` in the unboosted frame."""
        return float(self.solution.max_speed)

    @property
    def tau(self):
        return self.cfl * self.h / self.ref_velocity

    @property
    def re_h(self):
        return self.ref_velocity * self.h / self.nu

    @property
    def s(self):
        return self.nu * self.tau / self.h ** 2

    @property
    def n_steps(self):
        return max(1, int(round(self.t_end / self.tau)))

    def params(self):
        return SchemeParams(self.nu, self.h, self.tau, self.ref_velocity)

    def grid(self, eps=0.0):
        """Mesh seen in the frame boosted by ``eps`` at ``t = 0``."""
        ref = self.solution.boosted(eps)
        if self.ic == "wavy":
            return Grid1D(self.x_min, self.h, self.n_points)
        return Grid1D(self.x_min, self.h, self.n_points,
                      boundary=Boundary.DIRICHLET_EXACT, boundary_data=ref)


def _number(key, text, line, kind=float):
    try:
        value = kind(text)
    except ValueError:
        raise InvalidValue(f"{key}: cannot parse {text!r} as {kind.__name__}", line) from None
    if isinstance(value, float) and not math.isfinite(value):
        raise InvalidValue(f"{key}: value must be finite", line)
    return value


def parse_config(text):
    """Parse ``key = value`` lines into a validated :class:`ExperimentConfig`.

    Keys are case-insensitive except ``ic.A``; ``#`` starts a comment.
    """
    raw, where = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidValue(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key if key == "ic.A" else key.lower()
        key = _ALIASES.get(key, key)
        if key not in _KEYS:
            raise UnknownKey(f"unknown key {key!r}", lineno)
        if key in raw:
            raise ConflictingKeys(f"{key!r} given twice (first on line {where[key]})", lineno)
        raw[key], where[key] = value, lineno

    for key in _REQUIRED:
        if key not in raw:
            raise MissingKey(f"missing required key {key!r}")
    if ("re_h" in raw) == ("nu" in raw):
        if "re_h" in raw:
            raise ConflictingKeys("set exactly one of 're_h' and 'nu', not both",
                                  max(where["re_h"], where["nu"]))
        raise MissingKey("one of 're_h' or 'nu' is required")

    vals = {}
    ints = {"n_points"}
    for key in ("ic.a", "ic.b", "ic.A", "x_min", "length", "n_points", "cfl",
                "re_h", "nu", "t_end"):
        if key in raw:
            vals[key] = _number(key, raw[key], where[key], int if key in ints else float)
            if key in _POSITIVE and not vals[key] > 0:
                raise NonPositiveValue(f"{key} must be positive, got {raw[key]}", where[key])

    try:
        schemes = tuple(SchemeId.parse(s) for s in raw["scheme"].split(",") if s.strip())
    except ValueError as exc:
        raise InvalidValue(f"scheme: {exc}", where["scheme"]) from None
    if not schemes:
        raise InvalidValue("scheme list is empty", where["scheme"])
    ic = raw["ic"].strip().lower()
    if ic not in ("shock", "wavy"):
        raise InvalidValue(f"ic must be 'shock' or 'wavy', got {ic!r}", where["ic"])
    try:
        omega = OmegaClosure.parse(raw.get("omega", "cancel"))
    except ValueError as exc:
        raise InvalidValue(str(exc), where.get("omega")) from None
    if omega.rule == "frozen":
        raise InvalidValue("frozen omega is only meaningful for stability analysis",
                           where.get("omega"))
    frames = (0.0, 0.25, 0.5)
    if "frames" in raw:
        frames = tuple(_number("frames", f, where["frames"])
                       for f in raw["frames"].split(",") if f.strip())
        if not frames:
            raise InvalidValue("frame list is empty", where["frames"])
    merged = raw.get("merged", "true").strip().lower()
    if merged not in ("true", "false"):
        raise InvalidValue("merged must be true or false", where.get("merged"))

    x_min = vals.get("x_min", -1.0)
    length = vals.get("length", 2.0)
    n = vals["n_points"]
    if n < 5:
        raise InvalidValue("n_points must be at least 5", where["n_points"])
    h = length / n
    solution, nu = _initial_condition(ic, vals, where, x_min, length, h)
    return ExperimentConfig(schemes, ic, x_min, length, n, vals["cfl"], vals["t_end"],
                            nu, solution, frames, omega, raw.get("output"),
                            merged == "true")


def _initial_condition(ic, vals, where, x_min, length, h):
    if ic == "shock":
        for key in ("ic.A",):
            if key in vals:
                raise InvalidValue(f"{key} does not apply to the shock", where[key])
        a, b = vals.get("ic.a", 0.5), vals.get("ic.b", 0.5)
        speed = abs(a) + abs(b)
        nu = vals["nu"] if "nu" in vals else speed * h / vals["re_h"]
        return ShockSolution(a, b, nu, x_min + length / 2), nu
    for key in ("ic.a", "ic.b"):
        if key in vals:
            raise InvalidValue(f"{key} does not apply to the wavy solution", where[key])
    k = 2 * math.pi / length
    if "re_h" in vals:
        # Re_h = 2 k h / sqrt(A^2 - 1) does not depend on nu, so it fixes A
        A = math.sqrt(1 + (2 * k * h / vals["re_h"]) ** 2)
        if "ic.A" in vals and not math.isclose(vals["ic.A"], A, rel_tol=1e-9):
            raise ConflictingKeys(
                f"for the wavy solution re_h fixes ic.A = {A!r}; drop one of them",
                where["ic.A"])
        nu = 0.1
    else:
        A, nu = vals.get("ic.A", 2.0), vals["nu"]
    if not A > 1:
        raise InvalidValue("ic.A must exceed 1", where.get("ic.A"))
    return WavySolution(A, nu, length), nu


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


@dataclass
class ErrorSeries:
    scheme_id: SchemeId
    frame: str
    eps: float
    tau: float
    errors: list
    blowup_step: Optional[int] = None
    metadata: dict = field(default_factory=dict)

    @property
    def times(self):
        return [(k + 1) * self.tau for k in range(len(self.errors))]

    @property
    def rows(self):
        return list(zip(self.times, self.errors))

    @property
    def blew_up(self):
        return self.blowup_step is not None


def run_frame_experiment(config):
    """Run every scheme in every frame; returns one :class:`ErrorSeries` each.

    ``a`` and therefore ``tau`` are fixed from the unboosted frame, so CFL and
    Re_h are the same in all frames.
    """
    params = config.params()
    out = []
    for scheme in config.schemes:
        report = check_conditions(scheme, params, config.cfl ** 2 / 2)
        for idx, eps in enumerate(config.frames):
            label = f"F{idx + 1}"
            ref = config.solution.boosted(eps)
            base = State.sample(config.grid(0.0), config.solution, 0.0)
            initial, _ = frame_change(base, eps)
            initial = State(initial.values, 0.0, config.grid(eps))
            try:
                traj = run(scheme, initial, params, config.n_steps,
                           {"err": lambda s, ref=ref: l2_error(s, ref)}, config.omega)
                errors, blow = traj.records["err"], traj.blowup_step
            except ConvergenceFailure as exc:
                raise RuntimeError(f"{scheme.value} in {label}: {exc}") from exc
            meta = {"cfl": params.cfl, "re_h": params.re_h, "s": params.s,
                    "nu": params.nu, "h": params.h, "tau": params.tau,
                    "a": params.ref_velocity, "eps": eps,
                    "stable_by_conditions": report.stable}
            out.append(ErrorSeries(scheme, label, eps, params.tau, errors, blow, meta))
    return out


# {{{ CSV

def _fmt(v):
    return repr(float(v))


def series_csv(series):
    lines = ["t,err"] + [f"{_fmt(t)},{_fmt(e)}" for t, e in series.rows]
    if series.blew_up:
        lines.append(f"# blowup_step={series.blowup_step}")
    return "\n".join(lines) + "\n"


def merged_csv(series_list):
    """Wide form ``t,err_F1,err_F2,...``; truncated series leave empty cells."""
    taus = {s.tau for s in series_list}
    if len(taus) != 1:
        raise ValueError("merged output needs a common time step")
    tau = taus.pop()
    lines = ["t," + ",".join(f"err_{s.frame}" for s in series_list)]
    n = max(len(s.errors) for s in series_list)
    for k in range(n):
        cells = [_fmt(s.errors[k]) if k < len(s.errors) else "" for s in series_list]
        lines.append(_fmt((k + 1) * tau) + "," + ",".join(cells))
    for s in series_list:
        if s.blew_up:
            lines.append(f"# blowup_step={s.blowup_step} frame={s.frame}")
    return "\n".join(lines) + "\n"


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from None


def write_csv(series_list, path, merged=True):
    """Write CSV files; returns the paths written.

    Merged mode writes one wide file per scheme, otherwise one file per
    (scheme, frame). With a single output file ``path`` is used as is;
    otherwise suffixes ``_<scheme>`` and ``_<frame>`` are added to the stem.
    """
    series_list = list(series_list)
    if not series_list:
        raise ValueError("no series to write")
    path = Path(path)
    schemes = list(dict.fromkeys(s.scheme_id for s in series_list))

    def target(*parts):
        return path.with_name(path.stem + "".join(f"_{p}" for p in parts) + path.suffix)

    written = []
    if merged:
        for sc in schemes:
            group = [s for s in series_list if s.scheme_id is sc]
            p = path if len(schemes) == 1 else target(sc.value)
            _write(p, merged_csv(group))
            written.append(p)
    else:
        for s in series_list:
            p = path if len(series_list) == 1 else target(s.scheme_id.value, s.frame)
            _write(p, series_csv(s))
            written.append(p)
    return written


def write_metadata(series_list, path):
    """Sidecar JSON with per-run parameters and the stability verdict."""
    data = [{"scheme": s.scheme_id.value, "frame": s.frame,
             "blowup_step": s.blowup_step, **s.metadata} for s in series_list]
    _write(path, json.dumps(data, indent=2, sort_keys=True) + "\n")
    return Path(path)

# }}}


def _finals(series_list):
    finals = []
    for s in series_list:
        if s.blew_up or not s.errors or not math.isfinite(s.errors[-1]):
            return None
        finals.append(s.errors[-1])
    return finals


def spread(series_list):
    """Range ``max - min`` of the final errors across frames (inf on blow-up)."""
    finals = _finals(series_list)
    return math.inf if finals is None else max(finals) - min(finals)


def variation_factor(series_list):
    """Ratio ``max / min`` of the final errors across frames (inf on blow-up)."""
    finals = _finals(series_list)
    return math.inf if finals is None else max(finals) / min(finals)


SHOCK_CONFIG = """\
# travelling viscous shock, three Galilean frames
scheme = ftcs, lw, cn, semi
ic = shock
ic.a = 0.5
ic.b = 0.5
x_min = -1
length = 2
n_points = 128
cfl = 0.5
re_h = 4.0
t_end = 1.0
frames = 0, 0.25, 0.5
omega = cancel
merged = true
"""

WAVY_CONFIG = """\
# decaying periodic wave, three Galilean frames
scheme = ftcs, lw, cn, semi
ic = wavy
x_min = 0
length = 2
n_points = 128
cfl = 0.2
re_h = 0.06
t_end = 1.0
frames = 0, 0.25, 0.5
omega = cancel
merged = true
"""
