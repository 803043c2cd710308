"""Shared fixtures: reference device parameters and small operator sets."""

import pytest

from shuttlemon import make_operators, reference_params


@pytest.fixture(scope="session")
def ref():
    """Reference device: symmetric 20 Grad/s junctions, dissipative baths."""
    return reference_params()


@pytest.fixture(scope="session")
def ref_clean():
    """Reference device with all dissipation switched off."""
    return reference_params(gamma_m=0.0, gamma_q=0.0, temperature=0.0)


@pytest.fixture(scope="session")
def ops6():
    """Composite operators at Fock truncation 6 (12-dimensional space)."""
    return make_operators(6)
