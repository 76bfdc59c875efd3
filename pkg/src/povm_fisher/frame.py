"""The frame operator of a POVM in the state-weighted operator geometry.

The frame operator acts as ``F(A) = sum_i E_i <E_i, A>_rho / <E_i, I>_rho``.
Its quadratic form at an SLD is the classical Fisher information, so its
spectrum on the mean-zero subspace brackets the classical/quantum ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BasisStateMismatch,
    DimensionMismatch,
    InvalidInput,
    NotInformationallyComplete,
    SpectrumAnomaly,
    SpectrumOutOfRange,
)
from .estimation import SldDirection, mean_zero_direction, outcome_probabilities
from .operator_space import OperatorBasis, as_hermitian, build_basis, from_coords, to_coords
from .states import DensityMatrix, Povm, ensure_state

EIGEN_BAND_TOL = 1e-10
DEGENERACY_TOL = 1e-8
IDENTITY_OVERLAP_TOL = 1e-8
MEAN_ZERO_EIGEN_TOL = 1e-8
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class FrameSpectrum:
    """Eigen-decomposition of the frame operator, eigenvalues sorted descending.

    ``eigen_coords[k]`` holds the basis coordinates of ``eigen_operators[k]``.
    ``second_multiplicity``/``min_multiplicity`` count the eigenvalues (excluding
    the top one) within ``DEGENERACY_TOL`` of the second-largest/smallest value.
    """

    eigenvalues: np.ndarray
    eigen_operators: np.ndarray
    eigen_coords: np.ndarray
    basis: OperatorBasis
    is_ic: bool
    second_multiplicity: int
    min_multiplicity: int
    notes: tuple[str, ...] = ()

    @property
    def lambda_top(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_second(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def top_gap(self) -> float:
        return self.lambda_top - self.lambda_second

    @property
    def identity_overlap(self) -> float:
        return float(abs(self.eigen_coords[0, 0]))


class EstimationBounds(NamedTuple):
    lower: float
    upper: float
    best_direction: SldDirection
    worst_direction: SldDirection


def frame_apply(povm: Povm, rho: DensityMatrix, a) -> np.ndarray:
    """Action of the frame operator on a Hermitian operator (or a stack of them)."""
    rho = ensure_state(rho)
    a = np.asarray(a, dtype=complex)
    if a.ndim == 2:
        a = as_hermitian(a)
    if a.shape[-2:] != rho.matrix.shape:
        raise DimensionMismatch(f"operator shape {a.shape[-2:]} does not match state {rho.matrix.shape}")
    p = outcome_probabilities(povm, rho)
    overlaps = np.real(np.einsum("nij,...ji->...n", rho.matrix @ povm.effects, a))
    return np.tensordot(overlaps / p, povm.effects, axes=([-1], [0]))


def frame_matrix(povm: Povm, rho: DensityMatrix, basis: OperatorBasis) -> np.ndarray:
    """Frame operator in a rho-orthonormal basis, ``M_kl = <B_k, F(B_l)>_rho``."""
    rho = ensure_state(rho)
    if basis.rho.matrix.shape != rho.matrix.shape or not np.allclose(
        basis.rho.matrix, rho.matrix, rtol=0, atol=1e-14
    ):
        raise BasisStateMismatch("basis was built for a different state")
    p = outcome_probabilities(povm, rho)
    w = to_coords(povm.effects, basis).T / np.sqrt(p)
    return w @ w.T


def _count_near(values: np.ndarray, target: float) -> int:
    return int(np.sum(np.abs(values - target) <= DEGENERACY_TOL))


def spectrum(matrix, basis: OperatorBasis, is_ic: bool) -> FrameSpectrum:
    """Full eigen-decomposition of a frame matrix with the structural checks for IC inputs."""
    m = np.asarray(matrix, dtype=float)
    n = basis.size
    if m.shape != (n, n):
        raise DimensionMismatch(f"frame matrix has shape {m.shape}, basis has {n} elements")
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_TOL:
        raise InvalidInput(f"frame matrix is not symmetric (deviation {asym:.3g})")

    w, v = np.linalg.eigh((m + m.T) / 2)
    w, v = w[::-1], v[:, ::-1]
    if w[-1] < -EIGEN_BAND_TOL or w[0] > 1 + EIGEN_BAND_TOL:
        raise SpectrumOutOfRange(f"eigenvalues span [{w[-1]:.12g}, {w[0]:.12g}], outside [0, 1]")

    # sign convention: the first largest-magnitude coordinate is positive
    pivot = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[pivot, np.arange(n)])
    coords = v.T
    ops = from_coords(coords, basis)

    notes = tuple(
        f"eigenvalue {k} = {lam:.3g} is negative at the level of numerical noise"
        for k, lam in enumerate(w)
        if lam < 0
    )
    spec = FrameSpectrum(
        eigenvalues=w,
        eigen_operators=ops,
        eigen_coords=coords,
        basis=basis,
        is_ic=bool(is_ic),
        second_multiplicity=_count_near(w[1:], w[1]),
        min_multiplicity=_count_near(w[1:], w[-1]),
        notes=notes,
    )
    if is_ic:
        _check_ic_structure(spec)
    return spec


def _check_ic_structure(spec: FrameSpectrum) -> None:
    if abs(spec.lambda_top - 1.0) > EIGEN_BAND_TOL:
        raise SpectrumAnomaly(f"top eigenvalue {spec.lambda_top:.17g} differs from 1")
    if spec.identity_overlap < 1 - IDENTITY_OVERLAP_TOL:
        raise SpectrumAnomaly(f"top eigenvector overlaps the identity only by {spec.identity_overlap:.12g}")
    if spec.top_gap <= DEGENERACY_TOL:
        raise SpectrumAnomaly(f"eigenvalue 1 is degenerate (gap {spec.top_gap:.3g}) for an IC-POVM")
    if spec.lambda_min <= 0:
        raise SpectrumAnomaly(f"smallest eigenvalue {spec.lambda_min:.3g} is not positive for an IC-POVM")
    means = np.abs(spec.eigen_coords[1:, 0])
    if np.any(means > MEAN_ZERO_EIGEN_TOL):
        raise SpectrumAnomaly(f"eigen-operator leaves the mean-zero subspace (|Tr[rho v]| = {means.max():.3g})")


def frame_spectrum(povm: Povm, rho: DensityMatrix) -> FrameSpectrum:
    """Basis, frame matrix and spectrum in one call."""
    rho = ensure_state(rho)
    basis = build_basis(rho)
    return spectrum(frame_matrix(povm, rho, basis), basis, povm.is_ic)


def estimation_bounds(spec: FrameSpectrum) -> EstimationBounds:
    """Tight bracket ``[lambda_min, lambda_2]`` on I_C/I_Q and the extremal directions."""
    if not spec.is_ic:
        raise NotInformationallyComplete("bounds need an informationally complete POVM")
    rho = spec.basis.rho
    return EstimationBounds(
        lower=spec.lambda_min,
        upper=spec.lambda_second,
        best_direction=mean_zero_direction(rho, spec.eigen_operators[1]),
        worst_direction=mean_zero_direction(rho, spec.eigen_operators[-1]),
    )


def is_fisher_symmetric(spec: FrameSpectrum, rel_tol: float = DEGENERACY_TOL) -> bool:
    """True when all nontrivial eigenvalues coincide to relative tolerance ``rel_tol``."""
    return bool((spec.lambda_second - spec.lambda_min) / spec.lambda_second <= rel_tol)
