"""Report assembly and deterministic JSON serialization.

Reports only repackage values computed by the analysis modules; no new
arithmetic happens here.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from . import __version__
from .frame import FrameSpectrum, estimation_bounds, frame_spectrum, is_fisher_symmetric
from .operator_space import ORTHONORMALITY_TOL
from .states import FORMAT_TAG, DensityMatrix, Povm, matrix_to_json

FIG1_BLOCH_VECTOR = (0.3, 0.25, 0.4)
FIG1_STATE_NOTE = (
    "The reference state is read as rho = (I + 0.3 sigma_x + 0.25 sigma_y + 0.4 sigma_z) / 2, "
    "i.e. Bloch vector (0.3, 0.25, 0.4); the unnormalized reading I/2 + r.sigma is not positive "
    "semidefinite."
)


def _float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # short numeric rows stay on one line
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def spectrum_summary(spec: FrameSpectrum) -> dict:
    out = {
        "eigenvalues": spec.eigenvalues,
        "lambda_top": spec.lambda_top,
        "lambda_second": spec.lambda_second,
        "lambda_min": spec.lambda_min,
        "top_gap": spec.top_gap,
        "identity_overlap": spec.identity_overlap,
        "best_direction": None,
        "worst_direction": None,
        "fisher_symmetric": None,
        "degenerate_extremes": {
            "best_multiplicity": spec.second_multiplicity,
            "worst_multiplicity": spec.min_multiplicity,
        },
        "notes": list(spec.notes),
    }
    if spec.is_ic:
        bounds = estimation_bounds(spec)
        out["best_direction"] = matrix_to_json(bounds.best_direction.operator)
        out["worst_direction"] = matrix_to_json(bounds.worst_direction.operator)
        out["fisher_symmetric"] = is_fisher_symmetric(spec)
        if spec.second_multiplicity > 1 or spec.min_multiplicity > 1:
            out["degenerate_extremes"]["note"] = (
                "extremal eigenvalue is degenerate; any direction in its eigenspace is equally "
                "extremal and the reported operator is one solver-dependent choice"
            )
    return out


def analysis_report(
    rho: DensityMatrix,
    povm: Povm,
    digests: dict[str, str],
    notes: tuple[str, ...] = (),
) -> dict:
    """Full spectral analysis of ``(rho, povm)`` packaged as a JSON-ready dict."""
    spec = frame_spectrum(povm, rho)
    warnings = []
    if not povm.is_ic:
        warnings.append("NotInformationallyComplete: spectrum only, no Fisher-ratio bounds")
    if spec.basis.gram_residual > ORTHONORMALITY_TOL:
        warnings.append(
            f"operator basis orthonormality residual {spec.basis.gram_residual:.3g} exceeds {ORTHONORMALITY_TOL:g}"
        )
    summary = spectrum_summary(spec)
    if summary["degenerate_extremes"].get("note"):
        warnings.append("DegenerateExtremes: best/worst directions are not unique")
    bounds = None
    if povm.is_ic:
        b = estimation_bounds(spec)
        bounds = {"lambda_min": b.lower, "lambda_second": b.upper}
    return {
        "format": FORMAT_TAG,
        "tool_version": __version__,
        "inputs": dict(digests),
        "state_summary": {"dim": rho.dim, "eigenvalues": rho.eigenvalues},
        "povm_summary": {"n_outcomes": povm.n_outcomes, "is_ic": povm.is_ic, "ic_rank": povm.ic_rank},
        "spectrum": summary,
        "bounds": bounds,
        "fisher_symmetric": summary["fisher_symmetric"],
        "warnings": warnings,
        "notes": list(notes),
    }
