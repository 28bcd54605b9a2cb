"""Shared fixtures: constellations, quadrature tolerances and a small stopping rule."""

import pytest

from functions.constellation_utils import ConstellationUtils
from functions.models import Constellation, QuadratureSpec, StoppingRule


@pytest.fixture(scope="session")
def bpsk() -> Constellation:
    return ConstellationUtils.build_bpsk()


@pytest.fixture(scope="session")
def pam4() -> Constellation:
    return ConstellationUtils.build_pam(4)


@pytest.fixture(scope="session")
def qpsk() -> Constellation:
    return ConstellationUtils.build_qam(4)


@pytest.fixture(scope="session")
def qam16() -> Constellation:
    return ConstellationUtils.build_qam(16)


@pytest.fixture(scope="session")
def qam64() -> Constellation:
    return ConstellationUtils.build_qam(64)


@pytest.fixture(scope="session")
def quad_spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture
def small_rule() -> StoppingRule:
    return StoppingRule(min_symbol_errors=100, max_symbols=200_000, batch_size=20_000)
