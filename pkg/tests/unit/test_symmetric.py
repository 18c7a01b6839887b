"""
Unit tests for Newton identities.
"""

import numpy as np
import pytest

from src.algebra.symmetric import monic_coefficients, newton_to_elementary, power_sums


class TestNewtonIdentities:
    """Test suite for power sum / elementary symmetric conversion."""

    def test_two_roots(self):
        """Test e_1 = a + b and e_2 = ab for roots 2 and 3."""
        assert newton_to_elementary([5.0, 13.0]) == pytest.approx([5.0, 6.0])

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip_through_roots(self, seed):
        """Test that elementary values rebuild the original roots."""
        rng = np.random.default_rng(seed)
        roots = rng.normal(size=4) + 1j * rng.normal(size=4)

        elementary = newton_to_elementary(power_sums(roots, 4))
        rebuilt = np.roots(monic_coefficients(elementary))

        assert np.sort_complex(rebuilt) == pytest.approx(np.sort_complex(roots), abs=1e-9)

    def test_monic_coefficients_signs(self):
        """Test alternating signs of the monic coefficients."""
        coefficients = monic_coefficients([5.0, 6.0])

        assert coefficients.tolist() == [1.0, -5.0, 6.0]

    def test_empty_input(self):
        """Test that no power sums give no elementary values."""
        assert newton_to_elementary([]) == []
