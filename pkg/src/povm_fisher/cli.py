"""Command-line interface: ``validate``, ``analyze``, ``scan`` and ``fig1``.

Exit codes: 0 success, 1 domain or validation failure, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import FormatError, PovmFisherError
from .frame import frame_spectrum
from .reporting import FIG1_BLOCH_VECTOR, FIG1_STATE_NOTE, analysis_report, dumps, sha256_bytes
from .scan import bloch_scan, compare_with_spectrum, random_direction_scan, write_scan_csv
from .states import (
    FORMAT_TAG,
    bloch_state,
    build_sic_qubit,
    maximally_mixed,
    povm_effects_from_json,
    povm_problems,
    povm_to_json,
    state_matrix_from_json,
    state_problems,
    state_to_json,
    validate_povm,
    validate_state,
)

logger = logging.getLogger("povm_fisher")

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2
LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    level = LOG_LEVELS.get(os.environ.get("POVM_FISHER_LOG", "warn").lower(), logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def _read(path: str):
    """Parse a JSON input file; returns (document, sha256 of its bytes)."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(data), sha256_bytes(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from None


def _load_inputs(state_path: str, povm_path: str):
    state_doc, state_digest = _read(state_path)
    povm_doc, povm_digest = _read(povm_path)
    rho = validate_state(state_matrix_from_json(state_doc))
    povm = validate_povm(povm_effects_from_json(povm_doc))
    return rho, povm, {"state_sha256": state_digest, "povm_sha256": povm_digest}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _violation(exc: PovmFisherError) -> dict:
    entry = {"code": exc.code, "message": str(exc)}
    if hasattr(exc, "index"):
        entry["index"] = exc.index
    return entry


def cmd_validate(args) -> int:
    state_doc, _ = _read(args.state)
    povm_doc, _ = _read(args.povm)
    state_issues = state_problems(state_matrix_from_json(state_doc))
    effects = povm_effects_from_json(povm_doc)
    povm_issues = povm_problems(effects)
    povm_info = {"valid": not povm_issues, "violations": [_violation(e) for e in povm_issues]}
    if not povm_issues:
        povm = validate_povm(effects)
        povm_info.update(is_ic=povm.is_ic, ic_rank=povm.ic_rank)
    report = {
        "state": {"valid": not state_issues, "violations": [_violation(e) for e in state_issues]},
        "povm": povm_info,
    }
    sys.stdout.write(dumps(report))
    return EXIT_OK if not (state_issues or povm_issues) else EXIT_DOMAIN


def cmd_analyze(args) -> int:
    rho, povm, digests = _load_inputs(args.state, args.povm)
    report = analysis_report(rho, povm, digests)
    for w in report["warnings"]:
        logger.warning(w)
    _emit(dumps(report), args.out)
    return EXIT_OK


def _scan_sidecar(result, spec, digests: dict, extra: dict) -> dict:
    max_dir, max_ratio = result.max_sample
    min_dir, min_ratio = result.min_sample
    return {
        "format": FORMAT_TAG,
        "tool_version": __version__,
        "inputs": digests,
        "kind": result.kind,
        "grid_size": result.grid_size,
        **extra,
        "extrema": {
            "max": {"direction": max_dir, "ratio": max_ratio},
            "min": {"direction": min_dir, "ratio": min_ratio},
        },
        "spectral_reference": compare_with_spectrum(result, spec) if spec.is_ic else None,
    }


def _run_scan(rho, povm, args):
    if rho.dim == 2:
        return bloch_scan(povm, rho, args.grid), {}
    return (
        random_direction_scan(povm, rho, args.samples, args.seed),
        {"n_samples": args.samples, "seed": args.seed},
    )


def cmd_scan(args) -> int:
    rho, povm, digests = _load_inputs(args.state, args.povm)
    result, extra = _run_scan(rho, povm, args)
    spec = frame_spectrum(povm, rho)
    csv_path = Path(args.out)
    write_scan_csv(result, csv_path)
    csv_path.with_suffix(".json").write_text(dumps(_scan_sidecar(result, spec, digests, extra)))
    if not povm.is_ic:
        logger.warning("NotInformationallyComplete: no spectral reference for the scan")
    return EXIT_OK


def cmd_fig1(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sic = build_sic_qubit()
    legs = {"maximally_mixed": maximally_mixed(2), "fig1": bloch_state(FIG1_BLOCH_VECTOR)}

    povm_text = dumps(povm_to_json(sic))
    (out / "povm_sic.json").write_text(povm_text)
    povm_digest = sha256_bytes(povm_text.encode())

    digests = {}
    for name, rho in legs.items():
        text = dumps(state_to_json(rho))
        (out / f"state_{name}.json").write_text(text)
        digests[name] = {"state_sha256": sha256_bytes(text.encode()), "povm_sha256": povm_digest}
        notes = (FIG1_STATE_NOTE,) if name == "fig1" else ()
        report = analysis_report(rho, sic, digests[name], notes=notes)
        (out / f"report_{name}.json").write_text(dumps(report))

    rho = legs["fig1"]
    result = bloch_scan(sic, rho, args.grid)
    spec = frame_spectrum(sic, rho)
    write_scan_csv(result, out / "scan_fig1.csv")
    (out / "scan_fig1.json").write_text(dumps(_scan_sidecar(result, spec, digests["fig1"], {})))
    comparison = {
        "format": FORMAT_TAG,
        "tool_version": __version__,
        "bloch_vector": list(FIG1_BLOCH_VECTOR),
        "grid_size": result.grid_size,
        **compare_with_spectrum(result, spec),
        "provenance": FIG1_STATE_NOTE,
    }
    (out / "comparison.json").write_text(dumps(comparison))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="povm-fisher",
        description="Frame-operator bounds on the classical/quantum Fisher information ratio.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a state file and a POVM file", allow_abbrev=False)
    p.add_argument("--state", required=True)
    p.add_argument("--povm", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="frame spectrum and Fisher-ratio bounds", allow_abbrev=False)
    p.add_argument("--state", required=True)
    p.add_argument("--povm", required=True)
    p.add_argument("--out", help="report path (default: standard output)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="brute-force ratio scan over directions", allow_abbrev=False)
    p.add_argument("--state", required=True)
    p.add_argument("--povm", required=True)
    p.add_argument("--grid", type=int, default=10000, help="Fibonacci grid size (qubits)")
    p.add_argument("--samples", type=int, default=10000, help="random directions (d > 2)")
    p.add_argument("--seed", type=int, default=0, help="random direction seed (d > 2)")
    p.add_argument("--out", required=True, help="CSV path; the JSON sidecar goes next to it")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fig1", help="reproduce the SIC qubit example bundle", allow_abbrev=False)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grid", type=int, default=10000)
    p.set_defaults(func=cmd_fig1)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        logger.error("%s: %s", exc.code, exc)
        return EXIT_IO
    except PovmFisherError as exc:
        logger.error("%s: %s", exc.code, exc)
        return EXIT_DOMAIN
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
