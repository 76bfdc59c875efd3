"""Brute-force scans of I_C/I_Q over encoding directions.

This is the numerical oracle for the spectral predictions: it never touches
the frame operator, only the Fisher-information functionals.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDirection, DimensionNotTwo, InvalidInput, ZeroDirection
from .estimation import classical_fisher, quantum_fisher
from .frame import FrameSpectrum
from .operator_space import build_basis, from_coords, rho_matrix
from .states import PAULIS, DensityMatrix, Povm, ensure_state

MIN_GRID = 12
MIN_DIRECTION_NORM = 1e-12
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class ScanResult:
    """Sampled ratios. ``directions`` are Bloch unit vectors (``kind == "bloch"``)
    or unit coordinate vectors over the mean-zero basis elements (``kind == "random"``)."""

    directions: np.ndarray
    ratios: np.ndarray
    grid_size: int
    kind: str

    @property
    def samples(self) -> list[tuple[np.ndarray, float]]:
        return [(d, float(r)) for d, r in zip(self.directions, self.ratios)]

    @property
    def max_sample(self) -> tuple[np.ndarray, float]:
        k = int(np.argmax(self.ratios))
        return self.directions[k], float(self.ratios[k])

    @property
    def min_sample(self) -> tuple[np.ndarray, float]:
        k = int(np.argmin(self.ratios))
        return self.directions[k], float(self.ratios[k])


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` near-uniform unit vectors on the golden-angle spiral, shape ``(n, 3)``."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _ratios(povm: Povm, rho: DensityMatrix, ops: np.ndarray) -> np.ndarray:
    return classical_fisher(povm, rho, ops) / quantum_fisher(rho, ops)


def bloch_scan(povm: Povm, rho: DensityMatrix, grid_size: int) -> ScanResult:
    """Evaluate I_C/I_Q for ``X = n . sigma`` (made mean-zero) over a Fibonacci grid."""
    rho = ensure_state(rho)
    if rho.dim != 2 or povm.dim != 2:
        raise DimensionNotTwo("Bloch-sphere scans need a qubit state and POVM")
    if grid_size < MIN_GRID:
        raise InvalidInput(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    dirs = fibonacci_sphere(grid_size)
    x = np.tensordot(dirs, PAULIS, axes=1)
    means = np.real(np.einsum("ij,nji->n", rho.matrix, x))
    x = x - means[:, None, None] * np.eye(2)
    norms = np.sqrt(quantum_fisher(rho, x))
    keep = norms >= MIN_DIRECTION_NORM
    if not np.any(keep):
        raise DegenerateDirection("every scanned direction vanished after projection")
    return ScanResult(directions=dirs[keep], ratios=_ratios(povm, rho, x[keep]), grid_size=grid_size, kind="bloch")


def random_direction_scan(povm: Povm, rho: DensityMatrix, n_samples: int, seed: int) -> ScanResult:
    """Seeded Gaussian directions in the mean-zero subspace, any dimension."""
    if n_samples < 1:
        raise InvalidInput("n_samples must be >= 1")
    rho = ensure_state(rho)
    basis = build_basis(rho)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((n_samples, basis.size - 1))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    ops = from_coords(np.hstack([np.zeros((n_samples, 1)), c]), basis)
    return ScanResult(directions=c, ratios=_ratios(povm, rho, ops), grid_size=n_samples, kind="random")


def bloch_direction(op) -> np.ndarray:
    """Bloch vector ``(Tr[op sigma_k] / 2)_k`` of the traceless part of a qubit operator."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise DimensionNotTwo(f"expected a 2x2 operator, got shape {op.shape}")
    return np.real(np.einsum("kij,ji->k", PAULIS, op)) / 2


def angular_error(a, b, rho=None) -> float:
    """Angle in degrees between two sign-ambiguous directions, folded into [0, 90].

    Vectors use the Euclidean dot product; operators use ``<.,.>_rho``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InvalidInput(f"direction shapes differ: {a.shape} vs {b.shape}")
    if a.ndim == 1:
        ab, aa, bb = float(a @ b), float(a @ a), float(b @ b)
    else:
        if rho is None:
            raise InvalidInput("operator directions need a state for the inner product")
        r = rho_matrix(rho)

        def inner(x, y):
            return float(np.real(np.sum((r @ x) * y.T)))

        ab, aa, bb = inner(a, b), inner(a, a), inner(b, b)
    if aa <= 0 or bb <= 0:
        raise ZeroDirection("cannot measure the angle to a zero direction")
    cos = min(1.0, abs(ab) / np.sqrt(aa * bb))
    return float(np.degrees(np.arccos(cos)))


def spectral_directions(spec: FrameSpectrum, kind: str = "bloch") -> tuple[np.ndarray, np.ndarray]:
    """Unit best/worst eigen-directions in the chart used by scans of ``kind``."""
    if kind == "bloch":
        best, worst = bloch_direction(spec.eigen_operators[1]), bloch_direction(spec.eigen_operators[-1])
    else:
        best, worst = spec.eigen_coords[1, 1:].copy(), spec.eigen_coords[-1, 1:].copy()
    return best / np.linalg.norm(best), worst / np.linalg.norm(worst)


def compare_with_spectrum(result: ScanResult, spec: FrameSpectrum) -> dict:
    """Numeric extrema of a scan against the spectral bracket and eigen-directions."""
    best, worst = spectral_directions(spec, result.kind)
    max_dir, max_ratio = result.max_sample
    min_dir, min_ratio = result.min_sample
    return {
        "lambda_second": spec.lambda_second,
        "lambda_min": spec.lambda_min,
        "numeric_max_ratio": max_ratio,
        "numeric_min_ratio": min_ratio,
        "max_ratio_error": abs(max_ratio - spec.lambda_second),
        "min_ratio_error": abs(min_ratio - spec.lambda_min),
        "spectral_best_direction": best,
        "spectral_worst_direction": worst,
        "numeric_best_direction": max_dir,
        "numeric_worst_direction": min_dir,
        "best_angular_error_deg": angular_error(max_dir, best),
        "worst_angular_error_deg": angular_error(min_dir, worst),
        "best_multiplicity": spec.second_multiplicity,
        "worst_multiplicity": spec.min_multiplicity,
    }


def write_scan_csv(result: ScanResult, path) -> None:
    k = result.directions.shape[1]
    if result.kind == "bloch":
        header = ["nx", "ny", "nz", "ratio"]
    else:
        header = [f"coord_{i + 1}" for i in range(k)] + ["ratio"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for d, r in zip(result.directions, result.ratios):
            writer.writerow([format(float(v), ".17g") for v in d] + [format(float(r), ".17g")])
