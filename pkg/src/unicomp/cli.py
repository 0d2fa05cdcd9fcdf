"""Command-line entry point: ``unicomp <subcommand> <gate> [flags]``.

Exit codes: 0 success, 1 domain error (unknown gate, malformed file, cap
exceeded, failed verification), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .decoupling import (
    RandomUnitaryChannel,
    clifford_ensemble,
    clifford_reference_labels,
    decoupling_deviation,
    search_min_pauli_ensemble,
)
from .gates import UnknownGateError, named_gate, resolve_gate
from .linalg import DimensionCapError, LabeledOperator, matrix_from_json
from .pauli import conjugation_error, is_clifford
from .protocol import (
    average_fidelity_mc,
    cz_protocol_kraus,
    forward_process,
    run_cz_protocol,
)
from .rates import distcomp_achievable, distcomp_necessary, implement_bounds, resource_inequality_report
from .unitary import schmidt_decompose, schmidt_strength


class DomainError(Exception):
    pass


# -- output ----------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) + 0.0
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj, ensure_ascii=False) if isinstance(obj, list) else obj


def render(doc: dict, fmt: str) -> str:
    doc = _jsonable(doc)
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(doc):
        writer.writerow([key, "" if value is None else value])
    return buf.getvalue()


# -- subcommands ------------------------------------------------------------------

def _gate(args) -> tuple[str, LabeledOperator]:
    if args.gate_file is not None:
        return Path(args.gate_file).name, resolve_gate(path=args.gate_file)
    if args.gate is None:
        raise DomainError("no gate given: pass a registry name or --gate-file")
    return args.gate, named_gate(args.gate, args.d)


def cmd_analyze(args) -> dict:
    name, U = _gate(args)
    dec = schmidt_decompose(U)
    cliff = is_clifford(U)[0] if dec.d <= 5 else None
    return {
        "command": "analyze",
        "gate": name,
        "d": dec.d,
        "S": dec.S,
        "coeffs": dec.coeffs.tolist(),
        "K": schmidt_strength(dec),
        "is_clifford": cliff,
        "reconstruction_error": float(np.abs(dec.reconstruct() - U.matrix).max()),
    }


def cmd_clifford(args) -> dict:
    name, U = _gate(args)
    verdict, table = is_clifford(U)
    return {
        "command": "clifford",
        "gate": name,
        "d": U.layout.dims[0],
        "is_clifford": verdict,
        "generators": None if table is None else table.generator_rows(),
        "conjugation_error": None if table is None else conjugation_error(U, table),
    }


def cmd_decouple(args) -> dict:
    name, U = _gate(args)
    d = U.layout.dims[0]
    if args.clifford_construct:
        verdict, table = is_clifford(U)
        if not verdict:
            raise DomainError(f"gate {name} is not Clifford; the Pauli-translation construction does not apply")
        refs = clifford_reference_labels(table, args.n)
        ch = clifford_ensemble(U, table, refs)
        report = decoupling_deviation(U, ch)
        method = "clifford-construct"
        extra = {"reference_members": [[str(x) for x in r] for r in refs]}
    else:
        if d ** (2 * args.n) > 16:
            raise DomainError(f"search over {d ** (2 * args.n)} Paulis is out of range (d^(2n) <= 16)")
        report, _ = search_min_pauli_ensemble(U, n=args.n, eps=args.eps)
        method = "search"
        extra = {"eps": args.eps}
    return {"command": "decouple", "gate": name, "d": d, "method": method, **report.to_dict(), **extra}


def _load_ensemble(path: str, d: int) -> RandomUnitaryChannel:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"malformed ensemble file {path}: {exc}") from exc
    items = doc.get("members") if isinstance(doc, dict) else doc
    if not isinstance(items, list) or not items:
        raise DomainError(f"malformed ensemble file {path}: expected a non-empty list of matrices")
    members = []
    for item in items:
        layout, mat = matrix_from_json(item)
        if layout.dims != (d,):
            raise DomainError(f"malformed ensemble file {path}: members must act on one register of dim {d}")
        members.append(LabeledOperator(layout.__class__.of(("A", d)), mat, kind="unitary"))
    return RandomUnitaryChannel(target=("A",), members=tuple(members), n=1)


def _ensemble(args, name, U) -> tuple[RandomUnitaryChannel, str]:
    d = U.layout.dims[0]
    choice = args.ensemble
    if choice == "pauli":
        return RandomUnitaryChannel.full_pauli(d, args.n), "full Pauli"
    if choice == "auto":
        verdict, table = is_clifford(U)
        if verdict:
            return clifford_ensemble(U, table, clifford_reference_labels(table, args.n)), "Clifford translation"
        if d ** (2 * args.n) <= 16:
            _, members = search_min_pauli_ensemble(U, n=args.n, eps=1e-9)
            return RandomUnitaryChannel.from_paulis(members, d, args.n), "minimal Pauli subset"
        return RandomUnitaryChannel.full_pauli(d, args.n), "full Pauli"
    if args.n != 1:
        raise DomainError("ensemble files describe single-copy channels; use --n 1")
    return _load_ensemble(choice, d), f"file {Path(choice).name}"


def cmd_simulate(args) -> dict:
    if args.phi is not None:
        if args.gate_file is not None or (args.gate or "").upper() not in ("CPHASE", "CZ"):
            raise DomainError("--phi runs the controlled-phase protocol; use gate CPHASE (or CZ)")
        tr = run_cz_protocol(args.phi, seed=args.seed)
        out = {"command": "simulate", "gate": f"CPHASE({args.phi:g})", "protocol": "three-turn controlled-phase",
               **tr.to_dict()}
        if args.mc_samples is not None:
            U = np.diag([1, 1, 1, np.exp(1j * args.phi)])
            fbar, se, fe = average_fidelity_mc(cz_protocol_kraus(args.phi), U, args.mc_samples, args.seed)
            out["average_fidelity"] = {"samples": args.mc_samples, "seed": args.seed,
                                       "Fbar": fbar, "stderr": se, "F_e": fe}
        return out
    name, U = _gate(args)
    ch, how = _ensemble(args, name, U)
    _, tr = forward_process(U, ch, seed=args.seed)
    out = {
        "command": "simulate",
        "gate": name,
        "protocol": "forward process",
        "ensemble": how,
        "ensemble_size": ch.K,
        "n": ch.n,
        "members": [[str(x) for x in m] for m in ch.member_labels],
        **tr.to_dict(),
    }
    if args.mc_samples is not None:
        raise DomainError("--mc-samples applies to the controlled-phase protocol (pass --phi)")
    return out


def cmd_rates(args) -> dict:
    name, U = _gate(args)
    b = implement_bounds(U, search=U.layout.dims[0] ** 2 <= 16)
    out = {"command": "rates", "gate": name, "implement_bounds": b.to_dict(),
           "resource_inequality": resource_inequality_report(U, name, b)}
    if args.r is not None:
        out["distcomp_achievable"] = distcomp_achievable(U, args.r).to_dict()
    if args.qa is not None:
        out["distcomp_necessary"] = distcomp_necessary(U, args.qa).to_dict()
    return out


def cmd_verify(args) -> dict:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line(), file=sys.stderr)
    # timings go to stderr only, so stdout stays byte-identical across runs
    rows = [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in results]
    return {"command": "verify", "all_passed": all(r.ok for r in results), "criteria": rows}


COMMANDS = {
    "analyze": cmd_analyze,
    "clifford": cmd_clifford,
    "decouple": cmd_decouple,
    "simulate": cmd_simulate,
    "rates": cmd_rates,
    "verify": cmd_verify,
}


def _nonneg(text: str) -> float:
    x = float(text)
    if not np.isfinite(x) or x < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text!r}")
    return x


def _positive_int(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return x


def _angle(text: str) -> float:
    from .gates import _parse_angle

    try:
        return _parse_angle(text)
    except UnknownGateError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=_positive_int, default=2, help="local dimension for registry gates")
    common.add_argument("--n", type=_positive_int, default=1, help="block length")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--gate-file", default=None, help="JSON matrix file instead of a registry name")

    parser = argparse.ArgumentParser(prog="unicomp", description="Resource costs of implementing bipartite unitaries.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name != "verify":
            p.add_argument("gate", nargs="?", default=None,
                           help="I, CZ, CNOT, SWAP, CPHASE(phi), CT")
        return p

    add("analyze", "operator Schmidt decomposition and Schmidt strength")
    add("clifford", "Clifford verdict and generator table")
    p = add("decouple", "smallest decoupling Pauli ensemble")
    p.add_argument("--eps", type=_nonneg, default=1e-9)
    p.add_argument("--clifford-construct", action="store_true")
    p = add("simulate", "forward process or the controlled-phase protocol")
    p.add_argument("--ensemble", default="auto", help="auto, pauli, or a JSON file of member matrices")
    p.add_argument("--phi", type=_angle, default=None)
    p.add_argument("--mc-samples", type=int, default=None)
    p = add("rates", "rate triplet bounds")
    p.add_argument("--r", type=_nonneg, default=None, help="resource entanglement (ebits)")
    p.add_argument("--qa", type=_nonneg, default=None, help="compression rate Q_A")
    add("verify", "run the acceptance suite")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "mc_samples", None) is not None and args.mc_samples < 100:
        print(f"unicomp: error: --mc-samples must be at least 100, got {args.mc_samples}", file=sys.stderr)
        return 2
    try:
        doc = COMMANDS[args.command](args)
    except UnknownGateError as exc:
        print(f"unicomp: unknown gate: {exc}", file=sys.stderr)
        return 1
    except DimensionCapError as exc:
        print(f"unicomp: dimension cap exceeded: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ValueError) as exc:
        print(f"unicomp: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(doc, args.format))
    if args.command == "verify" and not doc["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
