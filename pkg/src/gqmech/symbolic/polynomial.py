"""Sparse multivariate polynomials over Q(i) on the phase-space variable list.

Every polynomial of dimension ``m`` lives over the fixed ordered variables::

    t, q1, ..., qm, p0, p1, ..., pm

so that the same type houses functions on the vertical cotangent bundle
(no ``p0``) and on the full cotangent bundle. Terms are stored as a dict from
exponent tuples (length ``2m + 2``) to :class:`ComplexRational` with zero
coefficients pruned, which makes equality a plain dict comparison.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from types import MappingProxyType
from typing import Union

import numpy as np

from .rational import ONE, ZERO, ComplexRational

__all__ = [
    "Polynomial",
    "variable_names",
    "variable_index",
    "poly_arith",
    "poly_diff",
    "poly_eval",
    "poly_substitute_affine",
]

Exponent = tuple[int, ...]
VarId = Union[int, str]


def variable_names(dim: int) -> tuple[str, ...]:
    """Ordered variable names for dimension ``dim``."""
    return (
        ("t",)
        + tuple(f"q{k}" for k in range(1, dim + 1))
        + ("p0",)
        + tuple(f"p{k}" for k in range(1, dim + 1))
    )


def variable_index(var: VarId, dim: int) -> int:
    """Resolve a variable name or index to its slot in the exponent tuple."""
    nvars = 2 * dim + 2
    if isinstance(var, (int, np.integer)) and not isinstance(var, bool):
        if 0 <= var < nvars:
            return int(var)
        raise ValueError(f"variable index {var} out of range for dim={dim}")
    if isinstance(var, str):
        names = variable_names(dim)
        try:
            return names.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r} for dim={dim}") from None
    raise TypeError(f"variable id must be int or str, got {type(var).__name__}")


def _as_coeff(value) -> ComplexRational:
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (float, complex)):
        raise TypeError("float coefficients are not exact; use ComplexRational.from_float")
    return ComplexRational(value)


class Polynomial:
    """Immutable sparse polynomial with exact complex-rational coefficients."""

    __slots__ = ("_dim", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None, dim: int = 1):
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"dim must be a positive integer, got {dim!r}")
        nvars = 2 * dim + 2
        clean: dict[Exponent, ComplexRational] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _as_coeff(c)
            if exps in clean:
                c = clean[exps] + c
            clean[exps] = c
        self._dim = dim
        self._terms = {e: c for e, c in clean.items() if not c.is_zero()}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict, dim: int) -> "Polynomial":
        obj = object.__new__(cls)
        obj._dim = dim
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls({}, dim)

    @classmethod
    def constant(cls, value, dim: int) -> "Polynomial":
        return cls({(0,) * (2 * dim + 2): value}, dim)

    @classmethod
    def variable(cls, var: VarId, dim: int) -> "Polynomial":
        idx = variable_index(var, dim)
        exps = [0] * (2 * dim + 2)
        exps[idx] = 1
        return cls({tuple(exps): 1}, dim)

    @classmethod
    def parse(cls, text: str, dim: int) -> "Polynomial":
        from .parser import poly_parse

        return poly_parse(text, dim)

    # basic properties ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def nvars(self) -> int:
        return 2 * self._dim + 2

    @property
    def terms(self) -> Mapping[Exponent, ComplexRational]:
        return MappingProxyType(self._terms)

    @property
    def names(self) -> tuple[str, ...]:
        return variable_names(self._dim)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, variables: Sequence[VarId]) -> int:
        """Joint degree in the given variables; ``-1`` for the zero polynomial."""
        idx = [variable_index(v, self._dim) for v in variables]
        return max((sum(e[i] for i in idx) for e in self._terms), default=-1)

    def momentum_degree(self, include_p0: bool = True) -> int:
        """Joint degree in the momenta (``p0`` optionally excluded)."""
        m = self._dim
        start = m + 1 if include_p0 else m + 2
        return max((sum(e[start:]) for e in self._terms), default=-1)

    def depends_on(self, var: VarId) -> bool:
        i = variable_index(var, self._dim)
        return any(e[i] for e in self._terms)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def constant_term(self) -> ComplexRational:
        return self._terms.get((0,) * self.nvars, ZERO)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self._dim != other._dim:
            raise ValueError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def _lift(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (float, complex)):
            return None
        try:
            return Polynomial.constant(other, self._dim)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in o._terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del terms[e]
                else:
                    terms[e] = s
        return Polynomial._from_clean(terms, self._dim)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_clean({e: -c for e, c in self._terms.items()}, self._dim)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (ComplexRational, int)) and not isinstance(other, bool):
            return self.scale(other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return Polynomial._from_clean({}, self._dim)
        terms: dict[Exponent, ComplexRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = terms.get(e)
                terms[e] = c if s is None else s + c
        return Polynomial._from_clean(
            {e: c for e, c in terms.items() if not c.is_zero()}, self._dim
        )

    __rmul__ = __mul__

    def scale(self, factor) -> "Polynomial":
        factor = _as_coeff(factor)
        if factor.is_zero():
            return Polynomial._from_clean({}, self._dim)
        return Polynomial._from_clean(
            {e: c * factor for e, c in self._terms.items()}, self._dim
        )

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(1, self._dim)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Polynomial":
        """Complex conjugate of the coefficients (the variables are real)."""
        return Polynomial._from_clean(
            {e: c.conjugate() for e, c in self._terms.items()}, self._dim
        )

    # calculus and substitution ----------------------------------------------

    def diff(self, var: VarId, order: int = 1) -> "Polynomial":
        """Exact partial derivative of the given order."""
        i = variable_index(var, self._dim)
        terms = {}
        for e, c in self._terms.items():
            k = e[i]
            if k < order:
                continue
            factor = 1
            for j in range(order):
                factor *= k - j
            ne = e[:i] + (k - order,) + e[i + 1:]
            terms[ne] = c * factor
        return Polynomial._from_clean(terms, self._dim)

    def diff_multi(self, alpha: Exponent) -> "Polynomial":
        """Apply the multi-derivative ``d^alpha`` (one order per variable)."""
        out = self
        for i, k in enumerate(alpha):
            if k:
                out = out.diff(i, k)
                if not out:
                    break
        return out

    def substitute_affine(self, mapping: Mapping[VarId, "Polynomial"]) -> "Polynomial":
        """Compose with an affine change of variables.

        ``mapping`` sends selected variables to affine polynomials in the
        same variable list; unmapped variables stay fixed.
        """
        subs: dict[int, Polynomial] = {}
        for var, expr in mapping.items():
            if not isinstance(expr, Polynomial):
                expr = Polynomial.constant(expr, self._dim)
            self._check(expr)
            if expr.degree() > 1:
                raise ValueError(
                    f"substitution for {var!r} is not affine (degree {expr.degree()})"
                )
            subs[variable_index(var, self._dim)] = expr
        if not subs:
            return self
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in powers:
                powers[key] = subs[i] if k == 1 else power(i, k - 1) * subs[i]
            return powers[key]

        result = Polynomial.zero(self._dim)
        for e, c in self._terms.items():
            kept = tuple(0 if i in subs else k for i, k in enumerate(e))
            term = Polynomial._from_clean({kept: c}, self._dim)
            for i, k in enumerate(e):
                if k and i in subs:
                    term = term * power(i, k)
            result = result + term
        return result

    def collect(self, variables: Sequence[VarId]) -> dict[Exponent, "Polynomial"]:
        """Group terms by their exponents in ``variables``.

        Returns a dict from the exponent tuple over ``variables`` to the
        coefficient polynomial, which no longer involves those variables.
        """
        idx = [variable_index(v, self._dim) for v in variables]
        groups: dict[Exponent, dict] = {}
        for e, c in self._terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: Polynomial._from_clean(v, self._dim) for k, v in groups.items()}

    def evaluate(self, point: Sequence) -> complex | np.ndarray:
        """Floating evaluation by direct monomial summation.

        ``point`` holds one entry per variable; entries may be scalars or
        numpy arrays that broadcast together.
        """
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} entries, expected {self.nvars}")
        total = 0j
        cache: dict[tuple[int, int], object] = {}
        for e, c in self._terms.items():
            val = complex(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = np.power(point[i], k) if k > 1 else point[i]
                    val = val * cache[key]
            total = total + val
        return total

    def __call__(self, *point):
        return self.evaluate(point)

    # equality and text --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._dim == other._dim and self._terms == other._terms
        if isinstance(other, (int, ComplexRational)) or hasattr(other, "denominator"):
            return self == Polynomial.constant(other, self._dim)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, ComplexRational]]:
        """Terms in canonical print order: higher degree first, then lexicographic."""
        return sorted(self._terms.items(), key=lambda ec: (-sum(ec[0]), [-k for k in ec[0]]))

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.names
        parts: list[str] = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            negative = c.is_real() and c._re < 0
            mag = -c if negative else c
            if not mono:
                body = str(mag)
            elif mag == ONE:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, dim={self._dim})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Exact ring operation ``op`` in {'add', 'sub', 'mul'}."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_diff(a: Polynomial, var: VarId) -> Polynomial:
    return a.diff(var)


def poly_eval(a: Polynomial, point: Sequence[float]) -> complex:
    return complex(a.evaluate(point))


def poly_substitute_affine(a: Polynomial, mapping: Mapping[VarId, Polynomial]) -> Polynomial:
    return a.substitute_affine(mapping)
