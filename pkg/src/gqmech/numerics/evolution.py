"""Time evolution: Crank-Nicolson for half-densities, RK4 for classical phase points."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..poisson import PhaseFunction, Space
from ..quantizer import QuantizationError
from .grid import GridSpec, GridState
from .stencils import hamiltonian_matrix

__all__ = [
    "SolverError",
    "CrankNicolson",
    "crank_nicolson_step",
    "step_sizes",
    "ClassicalState",
    "HamiltonFlow",
    "classical_step_rk4",
]

RESIDUAL_TOL = 1e-12


class SolverError(RuntimeError):
    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


def step_sizes(duration: float, dt: float) -> list[float]:
    """Steps of ``dt`` covering ``duration``, with a shorter final step if needed."""
    if dt <= 0 or duration < 0:
        raise ValueError("need dt > 0 and duration >= 0")
    n = int(np.floor(duration / dt + 1e-9))
    sizes = [dt] * n
    rest = duration - n * dt
    if rest > 1e-12 * dt:
        sizes.append(rest)
    return sizes


class CrankNicolson:
    """Cayley-transform propagator ``(1 + i dt/2 H) psi' = (1 - i dt/2 H) psi``.

    The Hamiltonian matrix is sampled at the step midpoint. For
    time-independent ``H`` the LU factorization is computed once per step size.
    """

    def __init__(self, H: PhaseFunction, spec: GridSpec, tol: float = RESIDUAL_TOL):
        if H.space is not Space.VQ or H.poly.momentum_degree() > 2:
            raise QuantizationError(f"Hamiltonian must be on V*Q with momentum degree <= 2: {H}")
        self.H = H
        self.spec = spec
        self.tol = tol
        self.time_dependent = H.poly.depends_on("t")
        self._cache: dict[float, tuple] = {}
        self.steps_taken = 0

    def _system(self, t_mid: float, dt: float):
        if not self.time_dependent and dt in self._cache:
            return self._cache[dt]
        Hm = hamiltonian_matrix(self.H, self.spec, t_mid)
        eye = sp.identity(self.spec.size, dtype=complex, format="csc")
        A = sp.csc_matrix(eye + 0.5j * dt * Hm)
        B = sp.csr_matrix(eye - 0.5j * dt * Hm)
        system = (A, B, spla.splu(A))
        if not self.time_dependent:
            self._cache[dt] = system
        return system

    def step(self, state: GridState, dt: float) -> GridState:
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        if state.spec != self.spec:
            raise ValueError("state lives on a different grid")
        A, B, lu = self._system(state.t + 0.5 * dt, dt)
        rhs = B @ state.flat
        psi = lu.solve(rhs)
        scale = np.linalg.norm(rhs)
        if scale > 0:
            residual = np.linalg.norm(A @ psi - rhs) / scale
            if not residual <= self.tol:
                raise SolverError(f"residual {residual:.2e} exceeds {self.tol:.0e}", self.steps_taken)
        self.steps_taken += 1
        return GridState(psi.reshape(self.spec.points), state.t + dt, self.spec)

    def run(self, state: GridState, sizes: list[float]) -> Iterator[GridState]:
        """Yield the state after each step in ``sizes``."""
        for dt in sizes:
            state = self.step(state, dt)
            yield state


def crank_nicolson_step(H: PhaseFunction, s: GridState, dt: float) -> GridState:
    return CrankNicolson(H, s.spec).step(s, dt)


@dataclass(frozen=True)
class ClassicalState:
    t: float
    q: tuple[float, ...]
    p: tuple[float, ...]

    def __post_init__(self):
        q = tuple(float(x) for x in np.atleast_1d(self.q))
        p = tuple(float(x) for x in np.atleast_1d(self.p))
        if len(q) != len(p):
            raise ValueError("q and p must have the same length")
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)


class HamiltonFlow:
    """Right-hand side ``qdot = dH/dp``, ``pdot = -dH/dq`` with ``tdot = 1``."""

    def __init__(self, H: PhaseFunction):
        if H.space is not Space.VQ:
            raise ValueError("classical Hamiltonian must be a function on V*Q")
        m = H.dim
        self.dim = m
        self._dq = [H.poly.diff(m + 1 + k) for k in range(1, m + 1)]
        self._dp = [-H.poly.diff(k) for k in range(1, m + 1)]

    def rhs(self, t: float, q: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        point = [t, *q, 0.0, *p]
        dq = np.array([complex(g.evaluate(point)).real for g in self._dq])
        dp = np.array([complex(g.evaluate(point)).real for g in self._dp])
        return dq, dp

    def step(self, s: ClassicalState, dt: float) -> ClassicalState:
        t = s.t
        q = np.array(s.q)
        p = np.array(s.p)
        k1q, k1p = self.rhs(t, q, p)
        k2q, k2p = self.rhs(t + dt / 2, q + dt / 2 * k1q, p + dt / 2 * k1p)
        k3q, k3p = self.rhs(t + dt / 2, q + dt / 2 * k2q, p + dt / 2 * k2p)
        k4q, k4p = self.rhs(t + dt, q + dt * k3q, p + dt * k3p)
        q = q + dt * (k1q + 2 * k2q + 2 * k3q + k4q) / 6
        p = p + dt * (k1p + 2 * k2p + 2 * k3p + k4p) / 6
        return ClassicalState(t + dt, tuple(q), tuple(p))

    def run(self, s: ClassicalState, sizes: list[float]) -> Iterator[ClassicalState]:
        for dt in sizes:
            s = self.step(s, dt)
            yield s


@lru_cache(maxsize=32)
def _flow(H: PhaseFunction) -> HamiltonFlow:
    return HamiltonFlow(H)


def classical_step_rk4(H: PhaseFunction, s: ClassicalState, dt: float) -> ClassicalState:
    """One classical RK4 step along the Hamiltonian connection of ``H``."""
    if len(s.q) != H.dim:
        raise ValueError(f"state dimension {len(s.q)} does not match Hamiltonian dimension {H.dim}")
    return _flow(H).step(s, dt)

