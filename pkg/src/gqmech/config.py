"""Model files: a flat sectioned ``key=value`` format.

Example::

    [model] dim=1 hamiltonian="0.5*p1^2 + 0.5*q1^2"
    [frame] velocity="0"
    [grid] min=-12 max=12 points=1024
    [initial] center_q=1.0 center_p=0.0 width=0.7
    [evolve] dt=0.001 steps=6284 observables="q1,p1,0.5*p1^2+0.5*q1^2"

A section header opens a section; any number of ``key=value`` pairs may
follow on the same or later lines. Values are shell-quoted when they
contain spaces and ``#`` starts a comment. Per-axis values in two
dimensions are comma lists (a single value applies to every axis).

Every key is required except ``observables`` and the ``[frame]`` keys,
of which exactly one of ``velocity`` (constant) or ``gamma`` (one
polynomial in ``t, q`` per axis) must be given.
"""

from __future__ import annotations

import math
import shlex
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .numerics import GridError, GridSpec, MovingFrame, packet_tail_mass
from .numerics.grid import TAIL_MASS_LIMIT
from .poisson import FrameConnection, PhaseFunction, Space
from .quantizer import QuantizationError, quantize
from .symbolic import ParseError, Polynomial, poly_parse

__all__ = [
    "ConfigError",
    "PacketParams",
    "EvolveParams",
    "HamiltonianSpec",
    "parse_config",
    "load_config",
    "builtin_configs",
]

SCHEMA: dict[str, tuple[str, ...]] = {
    "model": ("dim", "hamiltonian"),
    "frame": ("velocity", "gamma"),
    "grid": ("min", "max", "points"),
    "initial": ("center_q", "center_p", "width"),
    "evolve": ("dt", "steps", "observables"),
}
OPTIONAL = {("frame", "velocity"), ("frame", "gamma"), ("evolve", "observables")}


class ConfigError(ValueError):
    """Invalid model file; ``section`` and ``key`` locate the offending entry."""

    def __init__(self, section: str | None, key: str | None, reason: str):
        self.section = section
        self.key = key
        self.reason = reason
        where = ""
        if section:
            where = f"[{section}]" + (f" {key}" if key else "") + ": "
        super().__init__(where + reason)


@dataclass(frozen=True)
class PacketParams:
    center_q: tuple[float, ...]
    center_p: tuple[float, ...]
    width: tuple[float, ...]


@dataclass(frozen=True)
class EvolveParams:
    dt: float
    steps: int
    observables: tuple[tuple[str, PhaseFunction], ...]

    @property
    def duration(self) -> float:
        return self.dt * self.steps


@dataclass(frozen=True)
class HamiltonianSpec:
    """Validated model: Hamiltonian, reference frame, grid, initial packet and run settings."""

    dim: int
    hamiltonian: PhaseFunction
    frame: MovingFrame | FrameConnection
    grid: GridSpec
    initial: PacketParams
    evolve: EvolveParams

    @property
    def connection(self) -> FrameConnection:
        if isinstance(self.frame, MovingFrame):
            return self.frame.connection()
        return self.frame


def _tokens(text: str) -> dict[str, dict[str, str]]:
    raw: dict[str, dict[str, str]] = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            words = shlex.split(line, comments=True)
        except ValueError as exc:
            raise ConfigError(section, None, f"line {lineno}: {exc}") from None
        for word in words:
            if word.startswith("[") and word.endswith("]"):
                section = word[1:-1].strip()
                if section not in SCHEMA:
                    raise ConfigError(section, None, f"line {lineno}: unknown section")
                if section in raw:
                    raise ConfigError(section, None, f"line {lineno}: section repeated")
                raw[section] = {}
                continue
            key, eq, value = word.partition("=")
            if not eq or not key:
                raise ConfigError(section, None, f"line {lineno}: expected key=value, got {word!r}")
            if section is None:
                raise ConfigError(None, key, f"line {lineno}: key outside any section")
            if key not in SCHEMA[section]:
                raise ConfigError(section, key, "unknown key")
            if key in raw[section]:
                raise ConfigError(section, key, "key given twice")
            raw[section][key] = value
    for section, keys in SCHEMA.items():
        for key in keys:
            if (section, key) not in OPTIONAL and key not in raw.get(section, {}):
                raise ConfigError(section, key, "missing")
    return raw


def _number(section: str, key: str, text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(section, key, f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise ConfigError(section, key, f"not finite: {text!r}")
    return x


def _integer(section: str, key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(section, key, f"not an integer: {text!r}") from None


def _per_axis(section: str, key: str, text: str, dim: int, conv=_number) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        parts = parts * dim
    if len(parts) != dim:
        raise ConfigError(section, key, f"expected 1 or {dim} comma-separated values, got {len(parts)}")
    return tuple(conv(section, key, p) for p in parts)


def _exact(section: str, key: str, text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(section, key, f"not an exact number: {text!r}") from None


def _polynomial(section: str, key: str, text: str, dim: int) -> Polynomial:
    try:
        return poly_parse(text, dim)
    except ParseError as exc:
        raise ConfigError(section, key, f"cannot parse {text!r}: {exc}") from None


def _phase_function(section: str, key: str, text: str, dim: int) -> PhaseFunction:
    poly = _polynomial(section, key, text, dim)
    if poly.depends_on("p0"):
        raise ConfigError(section, key, f"{text!r} depends on p0; only functions on V*Q are allowed")
    return PhaseFunction(poly, Space.VQ)


def parse_config(text: str) -> HamiltonianSpec:
    """Parse and validate a model file."""
    raw = _tokens(text)
    model = raw["model"]
    dim = _integer("model", "dim", model["dim"])
    if dim not in (1, 2):
        raise ConfigError("model", "dim", f"must be 1 or 2, got {dim}")

    H = _phase_function("model", "hamiltonian", model["hamiltonian"], dim)
    deg = H.poly.momentum_degree(include_p0=False)
    if deg > 2:
        raise ConfigError("model", "hamiltonian", f"momentum degree {deg} exceeds 2")

    fr = raw.get("frame", {})
    if ("velocity" in fr) == ("gamma" in fr):
        raise ConfigError("frame", "velocity", "give exactly one of velocity or gamma")
    if "velocity" in fr:
        frame: MovingFrame | FrameConnection = MovingFrame(
            _per_axis("frame", "velocity", fr["velocity"], dim, _exact)
        )
    else:
        comps = [p.strip() for p in fr["gamma"].split(",")]
        if len(comps) != dim:
            raise ConfigError("frame", "gamma", f"expected {dim} components, got {len(comps)}")
        polys = tuple(_polynomial("frame", "gamma", c, dim) for c in comps)
        for c, g in zip(comps, polys):
            if g.momentum_degree() > 0:
                raise ConfigError("frame", "gamma", f"{c!r} depends on momenta")
            if not g.is_real():
                raise ConfigError("frame", "gamma", f"{c!r} has complex coefficients")
        frame = FrameConnection(polys)
        if not any(g.depends_on(v) for g in polys for v in range(0, dim + 1)):
            frame = MovingFrame(tuple(g.constant_term().re for g in polys))

    gr = raw["grid"]
    lower = _per_axis("grid", "min", gr["min"], dim)
    upper = _per_axis("grid", "max", gr["max"], dim)
    points = _per_axis("grid", "points", gr["points"], dim, _integer)
    try:
        grid = GridSpec(lower, upper, points)
    except GridError as exc:
        raise ConfigError("grid", None, str(exc)) from None

    ini = raw["initial"]
    center_q = _per_axis("initial", "center_q", ini["center_q"], dim)
    center_p = _per_axis("initial", "center_p", ini["center_p"], dim)
    width = _per_axis("initial", "width", ini["width"], dim)
    if any(w <= 0 for w in width):
        raise ConfigError("initial", "width", f"widths must be positive, got {list(width)}")
    tail = packet_tail_mass(grid, center_q, width)
    if tail > TAIL_MASS_LIMIT:
        raise ConfigError(
            "initial",
            "center_q",
            f"packet tail mass outside the box is {tail:.3e} (limit {TAIL_MASS_LIMIT:.0e})",
        )

    ev = raw["evolve"]
    dt = _number("evolve", "dt", ev["dt"])
    if dt <= 0:
        raise ConfigError("evolve", "dt", f"must be positive, got {dt}")
    steps = _integer("evolve", "steps", ev["steps"])
    if steps < 1:
        raise ConfigError("evolve", "steps", f"must be at least 1, got {steps}")
    observables = []
    for item in ev.get("observables", "").split(","):
        item = item.strip()
        if not item:
            continue
        f = _phase_function("evolve", "observables", item, dim)
        try:
            quantize(f)
        except QuantizationError as exc:
            raise ConfigError("evolve", "observables", f"{item!r} is not quantizable: {exc}") from None
        observables.append((item, f))

    return HamiltonianSpec(
        dim=dim,
        hamiltonian=H,
        frame=frame,
        grid=grid,
        initial=PacketParams(center_q, center_p, width),
        evolve=EvolveParams(dt, steps, tuple(observables)),
    )


def builtin_configs() -> dict[str, str]:
    """Shipped model files, keyed by stem."""
    root = resources.files("gqmech") / "configs"
    return {
        Path(entry.name).stem: entry.read_text()
        for entry in sorted(root.iterdir(), key=lambda e: e.name)
        if entry.name.endswith(".cfg")
    }


def load_config(path: str | Path) -> HamiltonianSpec:
    """Read a model file, or a shipped one by name (``oscillator``, ``free_particle``)."""
    p = Path(path)
    if not p.exists():
        shipped = builtin_configs()
        if str(path) in shipped:
            return parse_config(shipped[str(path)])
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(None, None, f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_config(text)
