"""
Newton Identities

Conversion between power sums and elementary symmetric values.
"""

from typing import List, Sequence

import numpy as np

from src.algebra.polynomial import Scalar


def newton_to_elementary(power_sums: Sequence[Scalar]) -> List[complex]:
    """
    Elementary symmetric values e_1..e_N from power sums s_1..s_N.

    Uses the recursion l * e_l = sum_{i=1..l} (-1)^(i-1) e_(l-i) s_i with e_0 = 1.
    """
    s = [complex(v) for v in power_sums]
    e = [1.0 + 0j]
    for level in range(1, len(s) + 1):
        acc = 0j
        for i in range(1, level + 1):
            sign = 1.0 if i % 2 == 1 else -1.0
            acc += sign * e[level - i] * s[i - 1]
        e.append(acc / level)
    return e[1:]


def power_sums(values: Sequence[Scalar], count: int) -> List[complex]:
    """s_l = sum_j values_j^l for l = 1..count."""
    v = np.asarray(values, dtype=complex)
    return [complex(np.sum(v**level)) for level in range(1, count + 1)]


def monic_coefficients(elementary: Sequence[Scalar]) -> np.ndarray:
    """
    Coefficients of Y^N - e_1 Y^(N-1) + ... + (-1)^N e_N, highest degree first.
    """
    coefficients = [1.0 + 0j]
    for level, value in enumerate(elementary, start=1):
        coefficients.append((-1) ** level * complex(value))
    return np.array(coefficients)
