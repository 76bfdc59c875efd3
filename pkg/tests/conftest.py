import numpy as np
import pytest

from povm_fisher.states import (
    bloch_state,
    build_pauli_povm,
    build_projective,
    build_sic_qubit,
    maximally_mixed,
    validate_state,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

FIG1_R = (0.3, 0.25, 0.4)


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def random_mean_zero(rng, rho, d):
    """Random Hermitian X with Tr[rho X] = 0 (plain projection, no package code)."""
    x = random_hermitian(rng, d)
    r = rho.matrix
    return x - np.trace(r @ x).real * np.eye(d)


def sld_oracle(rho, drho):
    """Solve (L rho + rho L)/2 = drho by brute-force Kronecker vectorization."""
    d = rho.shape[0]
    eye = np.eye(d)
    # row-major vec: vec(A X B) = (A kron B^T) vec(X)
    op = (np.kron(eye, rho.T) + np.kron(rho, eye)) / 2
    return np.linalg.solve(op, drho.reshape(-1)).reshape(d, d)


@pytest.fixture
def sic():
    return build_sic_qubit()


@pytest.fixture
def pauli6():
    return build_pauli_povm()


@pytest.fixture
def proj_z():
    return build_projective((0, 0, 1))


@pytest.fixture
def mixed2():
    return maximally_mixed(2)


@pytest.fixture
def fig1_state():
    return bloch_state(FIG1_R)


@pytest.fixture
def diag_state():
    return validate_state(np.diag([0.75, 0.25]))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
