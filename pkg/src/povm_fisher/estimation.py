"""Symmetric logarithmic derivatives and the classical/quantum Fisher information.

Functions taking an SLD accept either an :class:`SldDirection` or a raw
Hermitian array; raw arrays may also be stacks of shape ``(n, d, d)``, in
which case the functionals return one value per operator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotMeanZero, NotTraceless, RankDeficientState, ZeroDirection
from .operator_space import as_hermitian
from .states import RANK_TOL, DensityMatrix, Povm, ensure_state

logger = logging.getLogger(__name__)

MEAN_ZERO_TOL = 1e-10
TRACELESS_TOL = 1e-10
SLD_RESIDUAL_TOL = 1e-9
MIN_PROBABILITY = 1e-14


@dataclass(frozen=True)
class SldDirection:
    """A nonzero Hermitian ``L`` with ``Tr[rho L] = 0``: one admissible local model."""

    operator: np.ndarray
    rho_mean: float


@dataclass(frozen=True)
class FisherReport:
    i_classical: float
    i_quantum: float
    ratio: float
    crb_classical: float
    crb_quantum: float


def _means(r: np.ndarray, ops: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ij,...ji->...", r, ops))


def mean_zero_direction(rho: DensityMatrix, x) -> SldDirection:
    """Wrap ``x`` as an :class:`SldDirection`, checking ``Tr[rho x] = 0``."""
    if isinstance(x, SldDirection):
        return x
    rho = ensure_state(rho)
    x = as_hermitian(x, "direction")
    if x.shape != rho.matrix.shape:
        raise DimensionMismatch(f"direction has shape {x.shape}, state has {rho.matrix.shape}")
    mean = float(_means(rho.matrix, x))
    if abs(mean) > MEAN_ZERO_TOL:
        raise NotMeanZero(f"Tr[rho X] = {mean:.3g} is not zero")
    if not np.any(x):
        raise ZeroDirection("direction is the zero operator")
    return SldDirection(operator=x, rho_mean=mean)


def _sld_operators(rho: DensityMatrix, l) -> np.ndarray:
    if isinstance(l, SldDirection):
        ops = l.operator
    else:
        ops = np.asarray(l, dtype=complex)
        if ops.ndim == 2:
            return mean_zero_direction(rho, ops).operator
    if ops.shape[-2:] != rho.matrix.shape:
        raise DimensionMismatch(f"SLD has shape {ops.shape[-2:]}, state has {rho.matrix.shape}")
    means = _means(rho.matrix, ops)
    if np.any(np.abs(means) > MEAN_ZERO_TOL):
        raise NotMeanZero(f"max |Tr[rho L]| = {np.max(np.abs(means)):.3g} is not zero")
    return ops


def tangent_from_direction(rho: DensityMatrix, x) -> np.ndarray:
    """Tangent ``(X rho + rho X) / 2`` generated by a mean-zero direction."""
    rho = ensure_state(rho)
    x = mean_zero_direction(rho, x).operator
    r = rho.matrix
    return (x @ r + r @ x) / 2


def sld_from_tangent(rho: DensityMatrix, drho) -> SldDirection:
    """Solve ``drho = (L rho + rho L) / 2`` for ``L`` in the eigenbasis of ``rho``."""
    rho = ensure_state(rho)
    drho = as_hermitian(drho, "drho")
    if drho.shape != rho.matrix.shape:
        raise DimensionMismatch(f"drho has shape {drho.shape}, state has {rho.matrix.shape}")
    tr = np.trace(drho)
    if abs(tr) > TRACELESS_TOL:
        raise NotTraceless(f"Tr[drho] = {tr.real:.3g} is not zero")
    p, u = np.linalg.eigh(rho.matrix)
    denom = p[:, None] + p[None, :]
    if np.min(denom) < 2 * RANK_TOL * p[-1]:
        raise RankDeficientState("eigenvalue sums of rho are too small for the SLD")
    l_eig = 2 * (u.conj().T @ drho @ u) / denom
    l = u @ l_eig @ u.conj().T
    l = (l + l.conj().T) / 2
    r = rho.matrix
    residual = np.max(np.abs((l @ r + r @ l) / 2 - drho))
    if residual > SLD_RESIDUAL_TOL:
        logger.warning("SLD reconstruction residual %.3g exceeds %.0e", residual, SLD_RESIDUAL_TOL)
    return SldDirection(operator=l, rho_mean=float(_means(r, l)))


def _check_povm(povm: Povm, rho: DensityMatrix) -> None:
    if povm.dim != rho.dim:
        raise DimensionMismatch(f"POVM dim {povm.dim} != state dim {rho.dim}")


def outcome_probabilities(povm: Povm, rho: DensityMatrix) -> np.ndarray:
    rho = ensure_state(rho)
    _check_povm(povm, rho)
    p = _means(rho.matrix, povm.effects)
    # full-rank rho and nonzero effects make every p_i strictly positive
    assert np.all(p > MIN_PROBABILITY), "outcome with vanishing probability"
    return p


def classical_fisher(povm: Povm, rho: DensityMatrix, l):
    """``sum_i (Re Tr[rho L E_i])^2 / Tr[rho E_i]``."""
    rho = ensure_state(rho)
    ops = _sld_operators(rho, l)
    p = outcome_probabilities(povm, rho)
    dp = np.real(np.einsum("...ij,nji->...n", rho.matrix @ ops, povm.effects))
    out = np.sum(dp**2 / p, axis=-1)
    return float(out) if out.ndim == 0 else out


def quantum_fisher(rho: DensityMatrix, l):
    """``Tr[rho L^2]``, i.e. ``<L, L>_rho``."""
    rho = ensure_state(rho)
    ops = _sld_operators(rho, l)
    out = np.real(np.einsum("ij,...jk,...ki->...", rho.matrix, ops, ops))
    return float(out) if out.ndim == 0 else out


def fisher_report(povm: Povm, rho: DensityMatrix, l) -> FisherReport:
    rho = ensure_state(rho)
    l = mean_zero_direction(rho, l)
    ic = classical_fisher(povm, rho, l)
    iq = quantum_fisher(rho, l)
    return FisherReport(
        i_classical=ic,
        i_quantum=iq,
        ratio=ic / iq,
        crb_classical=1.0 / ic if ic > 0 else math.inf,
        crb_quantum=1.0 / iq,
    )
