"""Density matrices and POVMs: validation, standard constructions and JSON I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    CompletenessViolated,
    DimensionMismatch,
    EffectNotPositive,
    EffectZero,
    FormatError,
    ICGenerationFailed,
    InvalidInput,
    NotHermitian,
    NotPositive,
    PovmFisherError,
    RankDeficientState,
    TraceNotOne,
)
from .operator_space import HERMITICITY_TOL, hs_coordinates

FORMAT_TAG = "povm-fisher/1"

TRACE_TOL = 1e-10
RANK_TOL = 1e-12  # relative to the largest eigenvalue of rho
POSITIVITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
IC_RANK_RTOL = 1e-10
ZERO_EFFECT_TOL = 1e-14

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.array([SIGMA_X, SIGMA_Y, SIGMA_Z])

TETRAHEDRON = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3.0)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """A validated full-rank state. Build with :func:`validate_state`."""

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])


@dataclass(frozen=True)
class Povm:
    """A validated POVM. ``effects`` has shape ``(n_outcomes, d, d)``."""

    effects: np.ndarray
    ic_rank: int

    @property
    def dim(self) -> int:
        return self.effects.shape[-1]

    @property
    def n_outcomes(self) -> int:
        return self.effects.shape[0]

    @property
    def is_ic(self) -> bool:
        return self.ic_rank == self.dim**2


def _square(entries, name: str) -> np.ndarray:
    try:
        arr = np.asarray(entries, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name} is not a numeric matrix: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
        raise InvalidInput(f"{name} must be a square matrix of dimension >= 2, got shape {arr.shape}")
    return arr


def state_problems(entries) -> list[PovmFisherError]:
    """Every violated state invariant, as (unraised) exceptions. Empty means valid."""
    try:
        m = _square(entries, "rho")
    except InvalidInput as exc:
        return [exc]
    problems: list[PovmFisherError] = []
    dev = np.max(np.abs(m - m.conj().T))
    if dev > HERMITICITY_TOL:
        problems.append(NotHermitian(f"rho deviates from Hermitian by {dev:.3g}"))
        return problems
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        problems.append(TraceNotOne(f"Tr[rho] = {tr:.17g}"))
    evals = np.linalg.eigvalsh(m)
    if evals[0] < -POSITIVITY_TOL:
        problems.append(NotPositive(f"rho has negative eigenvalue {evals[0]:.6g}"))
    elif evals[0] < RANK_TOL * max(evals[-1], 0.0):
        problems.append(RankDeficientState(f"rho is rank deficient (min eigenvalue {evals[0]:.3g})"))
    return problems


def validate_state(entries) -> DensityMatrix:
    """Validate a density matrix; raises the first violated invariant."""
    problems = state_problems(entries)
    if problems:
        raise problems[0]
    m = np.asarray(entries, dtype=complex)
    return DensityMatrix(matrix=_readonly(m), eigenvalues=_readonly(np.linalg.eigvalsh(m)))


def ensure_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else validate_state(rho)


def bloch_state(r: Sequence[float]) -> DensityMatrix:
    """Qubit state ``(I + r . sigma) / 2``."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise InvalidInput("Bloch vector must have 3 components")
    return validate_state((np.eye(2) + np.tensordot(r, PAULIS, axes=1)) / 2)


def maximally_mixed(d: int) -> DensityMatrix:
    return validate_state(np.eye(d, dtype=complex) / d)


def random_state(dim: int, seed: int) -> DensityMatrix:
    """Seeded Ginibre-ensemble state ``G G^dag / Tr[G G^dag]`` (full rank almost surely)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return validate_state(m / np.trace(m).real)


def ic_rank(effects: np.ndarray) -> int:
    """Dimension of the real span of the effects (scale-free singular value cut)."""
    sv = np.linalg.svd(hs_coordinates(effects), compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > IC_RANK_RTOL * sv[0]))


def povm_problems(effect_list) -> list[PovmFisherError]:
    """Every violated POVM invariant, with outcome indices where applicable."""
    if len(effect_list) == 0:
        return [InvalidInput("POVM has no effects")]
    mats = []
    for i, e in enumerate(effect_list):
        try:
            mats.append(_square(e, f"effect {i}"))
        except InvalidInput as exc:
            return [exc]
    d = mats[0].shape[0]
    bad = [i for i, m in enumerate(mats) if m.shape != (d, d)]
    if bad:
        return [DimensionMismatch(f"effects {bad} do not have dimension {d}")]
    effects = np.array(mats)
    problems: list[PovmFisherError] = []
    for i, e in enumerate(effects):
        dev = np.max(np.abs(e - e.conj().T))
        if dev > HERMITICITY_TOL:
            problems.append(NotHermitian(f"effect {i} deviates from Hermitian by {dev:.3g}"))
            continue
        if np.max(np.abs(e)) <= ZERO_EFFECT_TOL:
            problems.append(EffectZero(i, f"effect {i} is the zero operator"))
            continue
        lo = np.linalg.eigvalsh(e)[0]
        if lo < -POSITIVITY_TOL:
            problems.append(EffectNotPositive(i, f"effect {i} has negative eigenvalue {lo:.6g}"))
    dev = np.max(np.abs(effects.sum(axis=0) - np.eye(d)))
    if dev > COMPLETENESS_TOL:
        problems.append(CompletenessViolated(f"effects sum to identity only within {dev:.3g}"))
    return problems


def validate_povm(effect_list) -> Povm:
    """Validate a list of effects and certify informational completeness."""
    problems = povm_problems(effect_list)
    if problems:
        raise problems[0]
    effects = np.array([np.asarray(e, dtype=complex) for e in effect_list])
    return Povm(effects=_readonly(effects), ic_rank=ic_rank(effects))


def build_sic_qubit() -> Povm:
    """Tetrahedral SIC-POVM ``(I + a_i . sigma) / 4``."""
    effects = [(np.eye(2) + np.tensordot(a, PAULIS, axes=1)) / 4 for a in TETRAHEDRON]
    return validate_povm(effects)


def build_pauli_povm() -> Povm:
    """Six-outcome POVM ``{(I +/- sigma_k) / 6}``, ordered x+, x-, y+, y-, z+, z-."""
    effects = [(np.eye(2) + s * p) / 6 for p in PAULIS for s in (1, -1)]
    return validate_povm(effects)


def build_projective(axis: Sequence[float]) -> Povm:
    """Two-outcome projective qubit measurement ``{(I +/- n . sigma) / 2}``."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise InvalidInput(f"axis must be a unit 3-vector, got {axis!r}")
    ns = np.tensordot(n, PAULIS, axes=1)
    return validate_povm([(np.eye(2) + ns) / 2, (np.eye(2) - ns) / 2])


def _inv_sqrt_psd(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(s)
    return (v / np.sqrt(w)) @ v.conj().T


def random_ic_povm(dim: int, n_outcomes: int, seed: int, max_retries: int = 20) -> Povm:
    """Seeded random IC-POVM ``E_i = S^-1/2 A_i S^-1/2`` with ``A_i = G_i G_i^dag``."""
    if n_outcomes < dim**2:
        raise InvalidInput(f"an IC-POVM needs at least {dim**2} outcomes, got {n_outcomes}")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        g = rng.standard_normal((n_outcomes, dim, dim)) + 1j * rng.standard_normal((n_outcomes, dim, dim))
        a = g @ g.conj().transpose(0, 2, 1)
        s_inv = _inv_sqrt_psd(a.sum(axis=0))
        e = s_inv @ a @ s_inv
        e = (e + e.conj().transpose(0, 2, 1)) / 2
        povm = validate_povm(list(e))
        if povm.is_ic:
            return povm
    raise ICGenerationFailed(f"no IC-POVM after {max_retries} draws (dim={dim}, outcomes={n_outcomes})")


# -- JSON I/O -------------------------------------------------------------


def matrix_to_json(m) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix is not a nested array of [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise FormatError(f"matrix must have shape (d, d, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(rho) -> dict:
    m = getattr(rho, "matrix", rho)
    return {"format": FORMAT_TAG, "dim": int(np.shape(m)[0]), "rho": matrix_to_json(m)}


def povm_to_json(povm) -> dict:
    effects = getattr(povm, "effects", povm)
    return {
        "format": FORMAT_TAG,
        "dim": int(np.shape(effects)[-1]),
        "effects": [matrix_to_json(e) for e in effects],
    }


def _check_header(obj, key: str) -> int:
    if not isinstance(obj, dict):
        raise FormatError("top-level JSON value must be an object")
    if obj.get("format") != FORMAT_TAG:
        raise FormatError(f"expected format {FORMAT_TAG!r}, got {obj.get('format')!r}")
    if key not in obj or "dim" not in obj:
        raise FormatError(f"missing field 'dim' or {key!r}")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 2:
        raise FormatError(f"'dim' must be an integer >= 2, got {dim!r}")
    return dim


def state_matrix_from_json(obj) -> np.ndarray:
    """Parse a state document into a raw (unvalidated) matrix."""
    dim = _check_header(obj, "rho")
    m = matrix_from_json(obj["rho"])
    if m.shape != (dim, dim):
        raise FormatError(f"'rho' has shape {m.shape}, declared dim {dim}")
    return m


def povm_effects_from_json(obj) -> list[np.ndarray]:
    """Parse a POVM document into raw (unvalidated) effect matrices."""
    dim = _check_header(obj, "effects")
    if not isinstance(obj["effects"], list) or not obj["effects"]:
        raise FormatError("'effects' must be a nonempty list")
    effects = [matrix_from_json(e) for e in obj["effects"]]
    for i, e in enumerate(effects):
        if e.shape != (dim, dim):
            raise FormatError(f"effect {i} has shape {e.shape}, declared dim {dim}")
    return effects

