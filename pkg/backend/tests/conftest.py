"""
tests/conftest.py

Test fixtures for API integration and unit tests.
Includes the async HTTP client, a click runner, the component table,
hardware profiles and a few reference frames and circuits.
"""

from collections.abc import AsyncGenerator
from pathlib import Path

import pytest
import pytest_asyncio
from click.testing import CliRunner
from httpx import ASGITransport, AsyncClient

from app.arch.schemas import HardwareProfile
from app.data.loader import ComponentTable, load_components
from app.gf2.symplectic import SymplecticMat, gate_matrix
from main import app

# --- Core Test Fixtures ---


@pytest.fixture(scope="session")
def transport() -> ASGITransport:
    """Fixture for ASGI transport."""
    return ASGITransport(app=app)


@pytest_asyncio.fixture(scope="function")
async def async_client(transport: ASGITransport) -> AsyncGenerator[AsyncClient, None]:
    """Fixture for HTTP async client."""
    async with AsyncClient(transport=transport, base_url="http://test") as client:
        yield client


@pytest.fixture
def runner() -> CliRunner:
    """Fixture for invoking the command group in-process."""
    return CliRunner()


# --- Domain Fixtures ---


@pytest.fixture(scope="session")
def table() -> ComponentTable:
    """Built-in component table."""
    return load_components()


@pytest.fixture
def profile_1e3() -> HardwareProfile:
    return HardwareProfile(p=1e-3, t_c=1e-6)


@pytest.fixture
def profile_1e4() -> HardwareProfile:
    return HardwareProfile(p=1e-4, t_c=1e-6)


@pytest.fixture
def hadamard() -> SymplecticMat:
    """Single-qubit Hadamard frame."""
    return gate_matrix("H", [0], 1)


@pytest.fixture
def hadamard_file(tmp_path: Path) -> Path:
    """Hadamard frame in the matrix text format."""
    path = tmp_path / "H.txt"
    path.write_text("01\n10\n", encoding="utf-8")
    return path


@pytest.fixture
def bell_circuit_file(tmp_path: Path) -> Path:
    """Two-qubit circuit with Cliffords, T gates and an adaptive measurement."""
    path = tmp_path / "bell.circ"
    path.write_text(
        "# two qubits on one unit\n"
        "QUBITS 2\n"
        "CLIFFORD H 0\n"
        "CLIFFORD CNOT 0 1\n"
        "T 0\n"
        "T 1\n"
        "MEASURE ZZ adaptive\n",
        encoding="utf-8",
    )
    return path
