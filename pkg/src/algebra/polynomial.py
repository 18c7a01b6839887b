"""
Sparse Multivariate Polynomials

Dictionary-backed polynomials with complex double coefficients. Exponent vectors are
tuples of non-negative integers; the zero polynomial is the empty map.
"""

import math
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from src.utils.exceptions import DimensionMismatchError, IndexOutOfRangeError

Exponent = Tuple[int, ...]
Scalar = Union[int, float, complex]

# Relative threshold under which coefficients are dropped when a result is normalized.
PRUNE_TOL = 1e-12


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial in ``num_vars`` variables with complex coefficients."""

    num_vars: int
    terms: Mapping[Exponent, complex]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise DimensionMismatchError("num_vars must be positive", num_vars=self.num_vars)
        clean: Dict[Exponent, complex] = {}
        for exponent, coefficient in self.terms.items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != self.num_vars:
                raise DimensionMismatchError(
                    "exponent length differs from num_vars",
                    exponent=exponent,
                    num_vars=self.num_vars,
                )
            if any(e < 0 for e in exponent):
                raise DimensionMismatchError("negative exponent", exponent=exponent)
            value = complex(coefficient)
            if value != 0:
                clean[exponent] = clean.get(exponent, 0j) + value
        clean = {e: c for e, c in clean.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    # Constructors

    @classmethod
    def zero(cls, num_vars: int) -> "MultiPoly":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: Scalar) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "MultiPoly":
        _check_index(index, num_vars)
        exponent = tuple(1 if i == index else 0 for i in range(num_vars))
        return cls(num_vars, {exponent: 1.0})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: Scalar = 1.0) -> "MultiPoly":
        return cls(len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def linear(cls, coefficients: Sequence[Scalar], constant: Scalar = 0.0) -> "MultiPoly":
        n = len(coefficients)
        terms: Dict[Exponent, complex] = {(0,) * n: complex(constant)}
        for i, c in enumerate(coefficients):
            exponent = tuple(1 if j == i else 0 for j in range(n))
            terms[exponent] = complex(c)
        return cls(n, terms)

    # Inspection

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Sequence[int]) -> complex:
        return self.terms.get(tuple(exponent), 0j)

    def support(self) -> List[Exponent]:
        return sorted(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        _check_index(index, self.num_vars)
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # Evaluation and calculus

    def __call__(self, x: Sequence[Scalar]) -> complex:
        return poly_eval(self, x)

    def diff(self, index: int) -> "MultiPoly":
        return poly_diff(self, index)

    def gradient(self) -> List["MultiPoly"]:
        return [poly_diff(self, i) for i in range(self.num_vars)]

    # Arithmetic

    def _coerce(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.num_vars != self.num_vars:
                raise DimensionMismatchError(
                    "polynomials live in different rings",
                    left=self.num_vars,
                    right=other.num_vars,
                )
            return other
        return MultiPoly.constant(self.num_vars, other)

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0j) + c
        return MultiPoly(self.num_vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            value = complex(other)
            return MultiPoly(self.num_vars, {e: c * value for e, c in self.terms.items()})
        other = self._coerce(other)
        terms: Dict[Exponent, complex] = {}
        for (e1, c1), (e2, c2) in cartesian(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, 0j) + c1 * c2
        return MultiPoly(self.num_vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, value: Scalar) -> "MultiPoly":
        return self * (1.0 / complex(value))

    def __pow__(self, power: int) -> "MultiPoly":
        if power < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.num_vars, 1.0)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    # Normalization

    def pruned(self, rel_tol: float = PRUNE_TOL) -> "MultiPoly":
        """Drop coefficients below ``rel_tol`` times the largest magnitude."""
        scale = self.max_abs_coefficient()
        if scale == 0:
            return self
        return MultiPoly(
            self.num_vars, {e: c for e, c in self.terms.items() if abs(c) > rel_tol * scale}
        )

    def normalized(self, tie_tol: float = 1e-9) -> "MultiPoly":
        """
        Divide by the largest-magnitude coefficient.

        Coefficients whose magnitude is within ``tie_tol`` (relative) of the largest are
        treated as tied, and the tie is broken by the greatest exponent in graded order,
        so that the result does not depend on roundoff among equal-sized coefficients.
        """
        scale = self.max_abs_coefficient()
        if scale == 0:
            return self
        candidates = [e for e, c in self.terms.items() if abs(c) >= (1 - tie_tol) * scale]
        pivot = max(candidates, key=lambda e: (sum(e), e))
        return (self / self.terms[pivot]).pruned()

    def truncated(self, order: int) -> "MultiPoly":
        """Keep terms of total degree at most ``order``."""
        return MultiPoly(self.num_vars, {e: c for e, c in self.terms.items() if sum(e) <= order})

    # Substitution

    def compose(self, substitutions: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomial ``substitutions[i]`` for variable ``i``."""
        if len(substitutions) != self.num_vars:
            raise DimensionMismatchError(
                "one substitution per variable is required",
                expected=self.num_vars,
                got=len(substitutions),
            )
        if not substitutions:
            return self
        target = substitutions[0].num_vars
        result = MultiPoly.zero(target)
        powers: Dict[Tuple[int, int], MultiPoly] = {}
        for exponent, coefficient in self.terms.items():
            term = MultiPoly.constant(target, coefficient)
            for i, e in enumerate(exponent):
                if e == 0:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = substitutions[i] ** e
                term = term * powers[key]
            result = result + term
        return result

    def to_pairs(self) -> List[Tuple[List[int], List[float]]]:
        """Serializable ``[exponent, [re, im]]`` pairs in sorted exponent order."""
        return [
            (list(e), [self.terms[e].real, self.terms[e].imag]) for e in sorted(self.terms)
        ]

    @classmethod
    def from_pairs(cls, num_vars: int, pairs: Iterable[Tuple[Sequence[int], Sequence[float]]]) -> "MultiPoly":
        terms: Dict[Exponent, complex] = {}
        for exponent, (re, im) in pairs:
            key = tuple(int(e) for e in exponent)
            terms[key] = terms.get(key, 0j) + complex(re, im)
        return cls(num_vars, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"MultiPoly({self.num_vars}, 0)"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), e)):
            monomial = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            parts.append(f"({self.terms[e]:.6g}){'*' + monomial if monomial else ''}")
        return f"MultiPoly({self.num_vars}, {' + '.join(parts)})"


def _check_index(index: int, num_vars: int) -> None:
    if not 0 <= index < num_vars:
        raise IndexOutOfRangeError(
            "variable index out of range", index=index, num_vars=num_vars
        )


def poly_eval(p: MultiPoly, x: Sequence[Scalar]) -> complex:
    """Evaluate ``p`` at the point ``x``."""
    if len(x) != p.num_vars:
        raise DimensionMismatchError(
            "point dimension differs from num_vars", expected=p.num_vars, got=len(x)
        )
    point = [complex(v) for v in x]
    total = 0j
    for exponent, coefficient in p.terms.items():
        total += coefficient * math.prod(point[i] ** e for i, e in enumerate(exponent) if e)
    return total


def poly_diff(p: MultiPoly, index: int) -> MultiPoly:
    """Formal partial derivative with respect to variable ``index`` (0-based)."""
    _check_index(index, p.num_vars)
    terms: Dict[Exponent, complex] = {}
    for exponent, coefficient in p.terms.items():
        k = exponent[index]
        if k == 0:
            continue
        lowered = exponent[:index] + (k - 1,) + exponent[index + 1 :]
        terms[lowered] = coefficient * k
    return MultiPoly(p.num_vars, terms)


def evaluate_jacobian(polys: Sequence[MultiPoly], x: Sequence[Scalar]) -> np.ndarray:
    """Numeric Jacobian matrix of ``polys`` at ``x`` (rows: polynomials)."""
    return np.array([[poly_eval(poly_diff(p, j), x) for j in range(p.num_vars)] for p in polys])


def distance_up_to_scale(p: MultiPoly, q: MultiPoly) -> float:
    """
    Relative coefficient distance between ``p`` and the best scalar multiple of ``q``.

    Returns ``min_c ||p - c q|| / ||p||`` over the union of supports (Euclidean norm of
    coefficient vectors).
    """
    if p.num_vars != q.num_vars:
        raise DimensionMismatchError("polynomials live in different rings")
    keys = sorted(set(p.terms) | set(q.terms))
    a = np.array([p.coefficient(k) for k in keys])
    b = np.array([q.coefficient(k) for k in keys])
    norm_a = np.linalg.norm(a)
    if norm_a == 0:
        return 0.0 if np.linalg.norm(b) == 0 else 1.0
    denom = np.vdot(b, b)
    if denom == 0:
        return 1.0
    scale = np.vdot(b, a) / denom
    return float(np.linalg.norm(a - scale * b) / norm_a)
