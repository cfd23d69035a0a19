"""Linear differential operators with polynomial coefficients, kept normal-ordered.

An operator is a finite sum ``sum_alpha c_alpha * d^alpha`` with every
coefficient multiplication to the left of every derivative. Multi-indices
run over the full phase-space variable list of the coefficient polynomials;
the ``varset`` tag fixes which directions may actually be differentiated.
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Callable, Mapping
from math import comb

from ..symbolic import Polynomial, variable_index
from ..symbolic.polynomial import VarId

__all__ = ["VarSet", "DiffOperator", "op_compose", "op_commutator", "op_formal_adjoint"]


class VarSet(enum.Enum):
    """Where an operator acts.

    ``CONFIG``: half-densities on configuration space ``(t, q)``.
    ``PHASE_T``: sections over T*Q ``(t, q, p0, p)``.
    ``PHASE_V``: sections over V*Q ``(t, q, p)``.
    """

    CONFIG = "config"
    PHASE_T = "phase_T"
    PHASE_V = "phase_V"

    def derivative_slots(self, dim: int) -> frozenset[int]:
        if self is VarSet.CONFIG:
            return frozenset(range(dim + 1))
        if self is VarSet.PHASE_T:
            return frozenset(range(2 * dim + 2))
        return frozenset(i for i in range(2 * dim + 2) if i != dim + 1)


Alpha = tuple[int, ...]


def _check_coefficient(c: Polynomial, varset: VarSet) -> None:
    if varset is VarSet.CONFIG and c.momentum_degree() > 0:
        raise ValueError(f"configuration-space coefficient depends on momenta: {c}")
    if varset is VarSet.PHASE_V and c.depends_on("p0"):
        raise ValueError(f"V*Q coefficient depends on p0: {c}")


class DiffOperator:
    """Immutable normal-ordered differential operator."""

    __slots__ = ("_dim", "_varset", "_terms")

    def __init__(self, terms: Mapping[Alpha, Polynomial], varset: VarSet, dim: int):
        nvars = 2 * dim + 2
        allowed = varset.derivative_slots(dim)
        clean: dict[Alpha, Polynomial] = {}
        for alpha, c in terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != nvars or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha}")
            bad = [i for i, a in enumerate(alpha) if a and i not in allowed]
            if bad:
                raise ValueError(f"{varset.name} operator cannot differentiate slot(s) {bad}")
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(c, dim)
            if c.dim != dim:
                raise ValueError("coefficient dimension mismatch")
            _check_coefficient(c, varset)
            if alpha in clean:
                c = clean[alpha] + c
            clean[alpha] = c
        self._dim = dim
        self._varset = varset
        self._terms = {a: c for a, c in clean.items() if c}

    @classmethod
    def _from_clean(cls, terms, varset, dim):
        obj = object.__new__(cls)
        obj._dim = dim
        obj._varset = varset
        obj._terms = terms
        return obj

    # constructors -------------------------------------------------------------

    @classmethod
    def zero(cls, varset: VarSet, dim: int) -> "DiffOperator":
        return cls._from_clean({}, varset, dim)

    @classmethod
    def identity(cls, varset: VarSet, dim: int) -> "DiffOperator":
        return cls.multiplication(Polynomial.constant(1, dim), varset)

    @classmethod
    def multiplication(cls, c: Polynomial, varset: VarSet) -> "DiffOperator":
        return cls({(0,) * (2 * c.dim + 2): c}, varset, c.dim)

    @classmethod
    def derivative(cls, var: VarId, varset: VarSet, dim: int, order: int = 1) -> "DiffOperator":
        alpha = [0] * (2 * dim + 2)
        alpha[variable_index(var, dim)] = order
        return cls({tuple(alpha): Polynomial.constant(1, dim)}, varset, dim)

    # properties -----------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def varset(self) -> VarSet:
        return self._varset

    @property
    def terms(self) -> Mapping[Alpha, Polynomial]:
        return dict(self._terms)

    def coefficient(self, alpha: Alpha) -> Polynomial:
        return self._terms.get(tuple(alpha), Polynomial.zero(self._dim))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def order(self) -> int:
        """Highest derivative order; ``-1`` for the zero operator."""
        return max((sum(a) for a in self._terms), default=-1)

    def differentiates(self, var: VarId) -> bool:
        i = variable_index(var, self._dim)
        return any(a[i] for a in self._terms)

    # linear structure -------------------------------------------------------------

    def _check(self, other: "DiffOperator") -> None:
        if not isinstance(other, DiffOperator):
            raise TypeError(f"expected DiffOperator, got {type(other).__name__}")
        if other._varset is not self._varset:
            raise ValueError(f"varset mismatch: {self._varset.name} vs {other._varset.name}")
        if other._dim != self._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._check(other)
        terms = dict(self._terms)
        for a, c in other._terms.items():
            s = terms[a] + c if a in terms else c
            if s:
                terms[a] = s
            else:
                terms.pop(a, None)
        return DiffOperator._from_clean(terms, self._varset, self._dim)

    def __neg__(self):
        return DiffOperator._from_clean(
            {a: -c for a, c in self._terms.items()}, self._varset, self._dim
        )

    def __sub__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "DiffOperator":
        """Left multiplication by a scalar or a polynomial function."""
        if isinstance(factor, Polynomial):
            _check_coefficient(factor, self._varset)
        terms = {}
        for a, c in self._terms.items():
            nc = c * factor
            if nc:
                terms[a] = nc
        return DiffOperator._from_clean(terms, self._varset, self._dim)

    def __mul__(self, factor):
        if isinstance(factor, DiffOperator):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    # algebra -----------------------------------------------------------------

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """Normal-ordered product ``self o other``.

        Uses ``d^alpha o c = sum_{beta <= alpha} C(alpha, beta) (d^beta c) d^(alpha - beta)``.
        """
        self._check(other)
        out: dict[Alpha, Polynomial] = {}
        for alpha, a in self._terms.items():
            support = [i for i, k in enumerate(alpha) if k]
            ranges = [range(alpha[i] + 1) for i in support]
            for beta_part in itertools.product(*ranges):
                beta = [0] * len(alpha)
                weight = 1
                for i, b in zip(support, beta_part):
                    beta[i] = b
                    weight *= comb(alpha[i], b)
                for gamma, b in other._terms.items():
                    db = b.diff_multi(beta)
                    if not db:
                        continue
                    idx = tuple(x - y + z for x, y, z in zip(alpha, beta, gamma))
                    term = a * db
                    if weight != 1:
                        term = term.scale(weight)
                    out[idx] = out[idx] + term if idx in out else term
        return DiffOperator._from_clean(
            {k: v for k, v in out.items() if v}, self._varset, self._dim
        )

    def __matmul__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.compose(other)

    def commutator(self, other: "DiffOperator") -> "DiffOperator":
        return self.compose(other) - other.compose(self)

    def formal_adjoint(self) -> "DiffOperator":
        """Adjoint for the pairing ``integral(rho1 * conj(rho2))`` on configuration space.

        ``(c d^alpha)^dagger = (-1)^|alpha| d^alpha o conj(c)``, re-normal-ordered.
        """
        if self._varset is not VarSet.CONFIG:
            raise ValueError("formal adjoint is defined for configuration-space operators only")
        out = DiffOperator.zero(self._varset, self._dim)
        for alpha, c in self._terms.items():
            sign = -1 if sum(alpha) % 2 else 1
            d = DiffOperator._from_clean(
                {alpha: Polynomial.constant(sign, self._dim)}, self._varset, self._dim
            )
            out = out + d.compose(DiffOperator.multiplication(c.conjugate(), self._varset))
        return out

    def apply(self, u: Polynomial) -> Polynomial:
        """Act on a polynomial section."""
        out = Polynomial.zero(self._dim)
        for alpha, c in self._terms.items():
            du = u.diff_multi(alpha)
            if du:
                out = out + c * du
        return out

    def map_coefficients(self, fn: Callable[[Polynomial], Polynomial]) -> "DiffOperator":
        return DiffOperator({a: fn(c) for a, c in self._terms.items()}, self._varset, self._dim)

    def coefficient_derivative(self, var: VarId) -> "DiffOperator":
        """Commutator with ``d/dvar``: differentiate every coefficient."""
        return self.map_coefficients(lambda c: c.diff(var))

    def at_time(self, t0) -> "DiffOperator":
        """Substitute ``t = t0`` into every coefficient."""
        t0 = Polynomial.constant(t0, self._dim)
        return self.map_coefficients(lambda c: c.substitute_affine({"t": t0}))

    def restrict_to_pullback_sections(self) -> "DiffOperator":
        """Action on sections independent of ``p0``, as a V*Q operator.

        Terms differentiating along ``p0`` vanish on such sections; the
        remaining coefficients must not involve ``p0``.
        """
        if self._varset is not VarSet.PHASE_T:
            raise ValueError("only T*Q operators can be restricted")
        p0 = self._dim + 1
        return DiffOperator(
            {a: c for a, c in self._terms.items() if not a[p0]}, VarSet.PHASE_V, self._dim
        )

    def is_self_adjoint(self) -> bool:
        return self == self.formal_adjoint()

    # equality and text -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (
            self._varset is other._varset
            and self._dim == other._dim
            and self._terms == other._terms
        )

    __hash__ = None

    def __str__(self):
        if not self._terms:
            return "0"
        names = Polynomial.zero(self._dim).names
        parts = []
        order = sorted(self._terms, key=lambda a: (-sum(a), [-k for k in a]))
        for alpha in order:
            c = self._terms[alpha]
            deriv = "*".join(
                f"d[{n}]" if k == 1 else f"d[{n}]^{k}" for n, k in zip(names, alpha) if k
            )
            coeff = str(c)
            if deriv:
                if coeff == "1":
                    parts.append(deriv)
                elif coeff == "-1":
                    parts.append(f"-{deriv}")
                else:
                    parts.append(f"({coeff})*{deriv}")
            else:
                parts.append(f"({coeff})")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOperator({self._varset.name}, dim={self._dim}: {self})"


def op_compose(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    return A.compose(B)


def op_commutator(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    return A.commutator(B)


def op_formal_adjoint(A: DiffOperator) -> DiffOperator:
    return A.formal_adjoint()

