"""Command-line front end.

Subcommands::

    check-dirac     exact symbolic suites (Dirac condition, evolution identity,
                    Heisenberg equations and frame splitting of the model)
    evolve          classical and Crank-Nicolson runs, written as CSV
    frame-compare   rest-frame versus moving-frame evolution

Exit status: 0 when every check passes, 1 on a failed check, 2 on a bad
model file or arguments, 3 on a runtime or solver error.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .config import ConfigError, HamiltonianSpec, load_config
from .numerics import (
    ClassicalState,
    CrankNicolson,
    GridError,
    HamiltonFlow,
    MovingFrame,
    SolverError,
    compare_frames,
    expectation,
    gaussian_packet,
    moving_frame_hamiltonian,
    norm_squared,
)
from .poisson import (
    PhaseFunction,
    Space,
    classical_evolution,
    evolution_identity_defect,
    frame_hamiltonian,
    frame_split,
)
from .quantizer import QuantizationMap, dirac_defect, heisenberg_derivative, quantize
from .symbolic import Polynomial, random_polynomial, random_vertical_affine

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3
DEFAULT_CONFIG = "oscillator"
SUITE_DIMS = (1, 2)
NORM_DRIFT_LIMIT = 1e-8
FRAME_LIMIT = 1e-4


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class Check:
    name: str
    passed: bool
    fields: dict[str, str] = field(default_factory=dict)
    detail: list[str] = field(default_factory=list)
    seconds: float | None = None


@dataclass
class RunReport:
    """Ordered check results, rendered as ``name status key=value ...`` lines."""

    command: str
    header: dict[str, str]
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self, timing: bool = False) -> str:
        head = " ".join(f"{k}={v}" for k, v in self.header.items())
        lines = [f"{self.command} {head}".rstrip()]
        for c in self.checks:
            parts = [c.name, "PASS" if c.passed else "FAIL"]
            parts += [f"{k}={v}" for k, v in c.fields.items()]
            if timing and c.seconds is not None:
                parts.append(f"seconds={c.seconds:.3f}")
            lines.append(" ".join(parts))
            lines += [f"  {d}" for d in c.detail]
        lines.append(f"overall {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


# check-dirac ----------------------------------------------------------------


def _suite(
    name: str,
    trials: int,
    seed: int,
    make_case: Callable[[random.Random, int], tuple],
    defect: Callable[..., object],
    describe: Callable[..., list[str]],
) -> Check:
    rng = random.Random(f"{seed}:{name}")
    start = time.perf_counter()
    nonzero = 0
    first: list[str] = []
    for i in range(trials):
        m = SUITE_DIMS[i % len(SUITE_DIMS)]
        case = make_case(rng, m)
        d = defect(*case)
        if d:
            nonzero += 1
            if not first:
                first = [f"counterexample trial={i} dim={m}"] + describe(*case) + [f"defect: {d}"]
    return Check(
        name,
        nonzero == 0,
        {"trials": str(trials), "nonzero": str(nonzero)},
        first,
        time.perf_counter() - start,
    )


def run_check_dirac(spec: HamiltonianSpec, trials: int, degree: int, seed: int) -> RunReport:
    """Exact symbolic checks; every defect must be the zero operator or polynomial.

    Suites alternate between one and two degrees of freedom. Random pairs
    have total degree at most ``degree`` (``degree + 1`` for the evolution
    identity); Schrodinger pairs are affine in momenta with coefficients of
    degree at most ``degree``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    report = RunReport("check-dirac", {"seed": str(seed), "trials": str(trials), "degree": str(degree)})

    def with_map(qmap):
        return lambda f, g: dirac_defect(f, g, qmap)

    def show(f, g):
        return [f"f = {f.poly}", f"g = {g.poly}"]

    def prequant_t_pair(rng, m):
        every = list(range(2 * m + 2))
        return tuple(
            PhaseFunction(random_polynomial(rng, m, degree, every, complex_coeffs=True), Space.TQ)
            for _ in range(2)
        )

    def prequant_v_pair(rng, m):
        return tuple(PhaseFunction(random_polynomial(rng, m, degree, complex_coeffs=True)) for _ in range(2))

    qm = QuantizationMap
    report.checks.append(
        _suite("prequant_T", trials, seed, prequant_t_pair, with_map(qm.PREQUANT_T), show)
    )
    report.checks.append(
        _suite("prequant_V", trials, seed, prequant_v_pair, with_map(qm.PREQUANT_V), show)
    )

    def affine_pair(rng, m):
        return tuple(
            PhaseFunction(random_vertical_affine(rng, m, degree, complex_coeffs=False)) for _ in range(2)
        )

    report.checks.append(
        _suite("schrodinger", trials, seed, affine_pair, with_map(qm.SCHRODINGER), show)
    )

    def evo_pair(rng, m):
        return tuple(PhaseFunction(random_polynomial(rng, m, degree + 1, complex_coeffs=True)) for _ in range(2))

    report.checks.append(
        _suite(
            "evolution_identity",
            trials,
            seed,
            evo_pair,
            lambda f, H: evolution_identity_defect(f, H).poly,
            lambda f, H: [f"f = {f.poly}", f"H = {H.poly}"],
        )
    )
    report.checks.extend(_model_checks(spec))
    return report


def _model_checks(spec: HamiltonianSpec) -> list[Check]:
    H = spec.hamiltonian
    m = spec.dim

    start = time.perf_counter()
    detail: list[str] = []
    coords = [f"q{k}" for k in range(1, m + 1)] + [f"p{k}" for k in range(1, m + 1)]
    for name in coords:
        f = PhaseFunction(Polynomial.variable(name, m))
        d = heisenberg_derivative(quantize(f), H) - quantize(classical_evolution(f, H))
        if d and not detail:
            detail = [f"observable {name}", f"defect: {d}"]
    heis = Check(
        "model_heisenberg",
        not detail,
        {"hamiltonian": _token(str(H.poly)), "observables": str(len(coords))},
        detail,
        time.perf_counter() - start,
    )

    start = time.perf_counter()
    conn = spec.connection
    energy = frame_split(H, conn)
    reassembled = frame_hamiltonian(conn).poly + energy.poly
    ok = reassembled == H.poly
    split = Check(
        "model_frame_split",
        ok,
        {"frame_energy": _token(str(energy.poly))},
        [] if ok else [f"reassembled: {reassembled}"],
        time.perf_counter() - start,
    )
    return [heis, split]


def _token(text: str) -> str:
    return text.replace(" ", "")


# evolve ---------------------------------------------------------------------


def run_evolve(spec: HamiltonianSpec, out: Path) -> RunReport:
    """Evolve the classical point and the packet; write ``classical.csv`` and ``quantum.csv``.

    ``classical.csv`` columns: ``t, q1..qm, p1..pm``. ``quantum.csv`` columns:
    ``t``, then ``re[f]`` and ``im[f]`` for each observable ``f`` in file
    order, then ``norm`` (the Hermitian form of the state with itself). One
    row per step, starting at ``t = 0``.
    """
    m = spec.dim
    ini = spec.initial
    sizes = [spec.evolve.dt] * spec.evolve.steps
    out.mkdir(parents=True, exist_ok=True)

    names = [name for name, _ in spec.evolve.observables]
    ops = [quantize(f) for _, f in spec.evolve.observables]
    flow = HamiltonFlow(spec.hamiltonian)
    cn = CrankNicolson(spec.hamiltonian, spec.grid)
    cs = ClassicalState(0.0, ini.center_q, ini.center_p)
    qs = gaussian_packet(spec.grid, ini.center_q, ini.center_p, ini.width, t=0.0)

    norm0 = norm_squared(qs)
    drift = 0.0
    with open(out / "classical.csv", "w", newline="") as fc, open(out / "quantum.csv", "w", newline="") as fq:
        wc = csv.writer(fc, lineterminator="\n")
        wq = csv.writer(fq, lineterminator="\n")
        wc.writerow(["t"] + [f"q{k}" for k in range(1, m + 1)] + [f"p{k}" for k in range(1, m + 1)])
        header = ["t"]
        for n in names:
            header += [f"re[{_token(n)}]", f"im[{_token(n)}]"]
        wq.writerow(header + ["norm"])

        def emit():
            wc.writerow([fmt(cs.t)] + [fmt(x) for x in cs.q] + [fmt(x) for x in cs.p])
            row = [fmt(qs.t)]
            for op in ops:
                v = expectation(op, qs)
                row += [fmt(v.real), fmt(v.imag)]
            wq.writerow(row + [fmt(nrm)])

        nrm = norm0
        emit()
        for dt in sizes:
            cs = flow.step(cs, dt)
            qs = cn.step(qs, dt)
            nrm = norm_squared(qs)
            drift = max(drift, abs(nrm - norm0))
            emit()

    report = RunReport("evolve", {"steps": str(len(sizes)), "dt": fmt(spec.evolve.dt)})
    report.checks.append(
        Check(
            "norm_drift",
            drift <= NORM_DRIFT_LIMIT,
            {"max": fmt(drift), "limit": fmt(NORM_DRIFT_LIMIT)},
        )
    )
    fields = {"t": fmt(cs.t)}
    fields.update({f"q{k}": fmt(x) for k, x in enumerate(cs.q, start=1)})
    fields.update({f"p{k}": fmt(x) for k, x in enumerate(cs.p, start=1)})
    report.checks.append(Check("classical_final", True, fields))
    return report


# frame-compare --------------------------------------------------------------


def run_frame_compare(spec: HamiltonianSpec, velocity: Sequence[Fraction] | None, out: Path) -> RunReport:
    """Compare evolve-then-transform with transform-then-evolve; write ``frame_compare.csv``.

    CSV columns: ``t``, then ``rest_qk, moving_qk`` for each axis, then
    ``rest_pk, moving_pk``. Also checks exactly that ``H`` equals
    ``p_k v^k`` plus the frame energy.
    """
    if velocity is not None:
        frame = MovingFrame(tuple(velocity))
    elif isinstance(spec.frame, MovingFrame):
        frame = spec.frame
    else:
        raise ConfigError("frame", "gamma", "frame-compare needs a constant-velocity frame")
    if frame.dim != spec.dim:
        raise ConfigError("frame", "velocity", f"expected {spec.dim} components, got {frame.dim}")
    m = spec.dim
    H = spec.hamiltonian
    ini = spec.initial
    out.mkdir(parents=True, exist_ok=True)

    energy = frame_split(H, frame.connection())
    reassembled = frame_hamiltonian(frame.connection()).poly + energy.poly
    moving_H = moving_frame_hamiltonian(H, frame)

    initial = gaussian_packet(spec.grid, ini.center_q, ini.center_p, ini.width, t=0.0)
    cmp = compare_frames(H, initial, frame, [spec.evolve.dt] * spec.evolve.steps)

    with open(out / "frame_compare.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["t"]
        header += [c for k in range(1, m + 1) for c in (f"rest_q{k}", f"moving_q{k}")]
        header += [c for k in range(1, m + 1) for c in (f"rest_p{k}", f"moving_p{k}")]
        w.writerow(header)
        for i, t in enumerate(cmp.times):
            row = [fmt(t)]
            for k in range(m):
                row += [fmt(cmp.rest_q[i, k]), fmt(cmp.moving_q[i, k])]
            for k in range(m):
                row += [fmt(cmp.rest_p[i, k]), fmt(cmp.moving_p[i, k])]
            w.writerow(row)

    vel = ",".join(str(v) for v in frame.velocity)
    report = RunReport("frame-compare", {"velocity": vel, "steps": str(spec.evolve.steps), "dt": fmt(spec.evolve.dt)})
    report.checks.append(
        Check(
            "frame_split",
            reassembled == H.poly,
            {"frame_energy": _token(str(energy.poly)), "moving_hamiltonian": _token(str(moving_H.poly))},
        )
    )
    report.checks.append(
        Check("max_dq", cmp.max_dq <= FRAME_LIMIT, {"value": fmt(cmp.max_dq), "limit": fmt(FRAME_LIMIT)})
    )
    report.checks.append(
        Check("max_dp", cmp.max_dp <= FRAME_LIMIT, {"value": fmt(cmp.max_dp), "limit": fmt(FRAME_LIMIT)})
    )
    return report


# argument handling ----------------------------------------------------------


def _uint(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an unsigned integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"not an unsigned integer: {text!r}")
    return value


def _velocity(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a velocity: {text!r}") from None


GLOBAL_DEFAULTS = {"config": None, "out": ".", "seed": 0, "trials": 200, "degree": 3, "timing": False}


def _global_flags(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("--config", metavar="PATH", default=s,
                        help="model file, or the name of a shipped one (oscillator, free_particle)")
    parser.add_argument("--out", metavar="DIR", default=s, help="output directory (default: .)")
    parser.add_argument("--seed", metavar="UINT", type=_uint, default=s, help="random seed (default: 0)")
    parser.add_argument("--trials", metavar="UINT", type=_uint, default=s, help="pairs per suite (default: 200)")
    parser.add_argument("--degree", metavar="UINT", type=_uint, default=s, help="polynomial degree (default: 3)")
    parser.add_argument("--timing", action="store_true", default=s, help="add wall-clock seconds to the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gqmech", description=__doc__.split("\n")[0])
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common)
    sub.add_parser("check-dirac", parents=[common], help="exact symbolic verification suites")
    sub.add_parser("evolve", parents=[common], help="classical and quantum evolution to CSV")
    fc = sub.add_parser("frame-compare", parents=[common], help="rest versus moving frame evolution")
    fc.add_argument("--velocity", type=_velocity, default=None, metavar="V[,V]",
                    help="frame velocity (default: the model's [frame] velocity)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    args.out_given = hasattr(args, "out")
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    out = Path(args.out)
    try:
        config = args.config
        if config is None:
            if args.command != "check-dirac":
                raise ConfigError(None, None, "--config is required for this command")
            config = DEFAULT_CONFIG
        spec = load_config(config)
        if args.command == "check-dirac":
            if args.trials < 1:
                raise ConfigError(None, None, "--trials must be at least 1")
            report = run_check_dirac(spec, args.trials, args.degree, args.seed)
        elif args.command == "evolve":
            report = run_evolve(spec, out)
        else:
            report = run_frame_compare(spec, args.velocity, out)
        text = report.render(timing=args.timing)
        if args.command != "check-dirac" or args.out_given:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{args.command.replace('-', '_')}.txt").write_text(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, GridError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
