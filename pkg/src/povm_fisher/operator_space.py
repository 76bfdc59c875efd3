"""Geometry of the real space of Hermitian operators under the state-weighted
inner product ``<A, B>_rho = Re Tr[rho A B]``.

Hermitian operators are plain ``(d, d)`` complex numpy arrays throughout the
package; :func:`as_hermitian` is the single validation gate for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NotHermitian

if TYPE_CHECKING:
    from .states import DensityMatrix

HERMITICITY_TOL = 1e-10
ORTHONORMALITY_TOL = 1e-9

RhoLike = Union["DensityMatrix", np.ndarray]


def rho_matrix(rho: RhoLike) -> np.ndarray:
    """Return the raw matrix of a :class:`DensityMatrix` (arrays pass through unchecked)."""
    m = getattr(rho, "matrix", rho)
    return np.asarray(m, dtype=complex)


def as_hermitian(a, name: str = "operator", tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Coerce ``a`` to a complex square array and check Hermiticity entrywise.

    Inputs that fail the check are rejected, never symmetrized.
    """
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInput(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise InvalidInput(f"{name} must have dimension >= 2")
    dev = np.max(np.abs(arr - arr.conj().T))
    if dev > tol:
        raise NotHermitian(f"{name} deviates from Hermitian by {dev:.3g} (tol {tol:g})")
    return arr


def _check_dims(*arrays: np.ndarray) -> int:
    d = arrays[0].shape[-1]
    for arr in arrays:
        if arr.shape[-2:] != (d, d):
            raise DimensionMismatch(f"dimension mismatch: {arr.shape[-2:]} vs {(d, d)}")
    return d


def rho_inner(a, b, rho: RhoLike) -> float:
    """State-weighted inner product ``Re Tr[rho a b]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    r = rho_matrix(rho)
    _check_dims(a, b, r)
    # Tr[X Y] = sum_ij X_ij Y_ji
    return float(np.real(np.sum((r @ a) * b.T)))


def gell_mann_basis(d: int) -> np.ndarray:
    """Identity followed by the generalized Gell-Mann matrices.

    Order: identity, symmetric ``E_jk + E_kj`` (j < k), antisymmetric
    ``-i(E_jk - E_kj)`` (j < k), then diagonal. For ``d = 2`` this is
    ``(I, sigma_x, sigma_y, sigma_z)``.
    """
    if d < 2:
        raise InvalidInput("dimension must be >= 2")
    out = [np.eye(d, dtype=complex)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        out.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        out.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return np.array(out)


def hs_coordinates(ops: np.ndarray) -> np.ndarray:
    """Real Hilbert-Schmidt coordinates ``Tr[G_k A]`` of a stack of Hermitian operators.

    Returns an array of shape ``(d**2, n)``, one column per operator.
    """
    ops = np.asarray(ops, dtype=complex)
    g = gell_mann_basis(ops.shape[-1])
    return np.real(np.einsum("kij,nji->kn", g, ops))


@dataclass(frozen=True)
class OperatorBasis:
    """A rho-orthonormal basis of Hermitian operators whose first element is the identity.

    ``elements[1:]`` span the mean-zero subspace ``{X : Tr[rho X] = 0}``.
    """

    rho: "DensityMatrix"
    elements: np.ndarray
    gram_residual: float

    @property
    def dim(self) -> int:
        return self.elements.shape[-1]

    @property
    def size(self) -> int:
        return self.elements.shape[0]

    @property
    def well_conditioned(self) -> bool:
        return self.gram_residual <= ORTHONORMALITY_TOL


def _stack_inner(ops: np.ndarray, a: np.ndarray, r: np.ndarray) -> np.ndarray:
    # <ops_k, a>_rho for every k
    return np.real(np.einsum("kij,ji->k", r @ ops, a))


def build_basis(rho: "DensityMatrix") -> OperatorBasis:
    """Gram-Schmidt (two passes) of the identity + Gell-Mann set under ``<.,.>_rho``."""
    from .states import ensure_state

    rho = ensure_state(rho)
    r = rho.matrix
    canon = gell_mann_basis(rho.dim)
    basis = np.empty_like(canon)
    for k, v in enumerate(canon):
        w = v.copy()
        for _ in range(2):
            if k:
                w = w - np.tensordot(_stack_inner(basis[:k], w, r), basis[:k], axes=1)
        norm = np.sqrt(rho_inner(w, w, r))
        basis[k] = w / norm
    # <I, I>_rho = Tr[rho] = 1 up to rounding; keep the identity exact
    basis[0] = np.eye(rho.dim)
    gram = np.real(np.einsum("kij,lji->kl", r @ basis, basis))
    residual = float(np.max(np.abs(gram - np.eye(len(basis)))))
    return OperatorBasis(rho=rho, elements=basis, gram_residual=residual)


def to_coords(a, basis: OperatorBasis) -> np.ndarray:
    """Coordinates ``c_k = <B_k, a>_rho``; accepts a single operator or a stack."""
    a = np.asarray(a, dtype=complex)
    if a.shape[-2:] != (basis.dim, basis.dim):
        raise DimensionMismatch(f"operator shape {a.shape[-2:]} does not match basis dim {basis.dim}")
    rb = basis.rho.matrix @ basis.elements
    return np.real(np.einsum("kij,...ji->...k", rb, a))


def from_coords(c, basis: OperatorBasis) -> np.ndarray:
    """Operator ``sum_k c_k B_k``; accepts a single coordinate vector or a stack."""
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != basis.size:
        raise InvalidInput(f"expected {basis.size} coordinates, got {c.shape[-1]}")
    return np.tensordot(c, basis.elements, axes=([-1], [0]))
