"""Command-line front end: label algebra, S-matrices, fusion, verification."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import verify as verify_mod
from .labels import (
    HWLabel,
    StandardLabel,
    gap_charges,
    orbit_type,
    parse_label,
    resolution,
)
from .levels import (
    LabelError,
    LevelParams,
    OrbitClass,
    RSLabel,
    enumerate_infwts,
    enumerate_surv,
    hw_data,
    level_params,
    orbit_of,
    w3_data,
)
from .verlinde import (
    NotStabilisedError,
    OracleError,
    fuse,
    simple_currents,
    standard_kernel,
    type3_kernel,
)
from .w3modular import DEFAULT_TOL, W3SMatrix

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2


def _emit(args, payload):
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
        return
    if args.table:
        _print_table(payload)
    else:
        print(json.dumps(payload, indent=2))


def _print_table(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                print(f"{pad}{key}:")
                _print_table(value, indent + 1)
            else:
                print(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        for value in payload:
            _print_table(value, indent)
            if isinstance(value, dict):
                print()
    else:
        print(f"{pad}{payload}")


def _frac(x: Fraction) -> str:
    return str(x)


def cmd_list_modules(params: LevelParams, args) -> dict:
    rows = []
    for lab in enumerate_surv(params):
        data = hw_data(params, lab)
        rows.append(
            {
                "label": str(lab),
                "j": _frac(data.j),
                "delta": _frac(data.delta),
                "type": orbit_type(params, lab),
            }
        )
    families = []
    for orb in enumerate_infwts(params):
        wd = w3_data(params, orb)
        families.append(
            {
                "orbit": str(orb),
                "w3_delta": _frac(wd.delta),
                "gap_charges": sorted(_frac(j) for j in gap_charges(params, orb)),
            }
        )
    return {
        "u": params.u,
        "v": params.v,
        "k": _frac(params.k),
        "c_bp": _frac(params.c_bp),
        "highest_weight": rows,
        "standard_families": families,
    }


def cmd_orbit(params: LevelParams, args) -> dict:
    label = parse_label(params, args.labels[0])
    if isinstance(label, RSLabel):
        orb = orbit_of(params, label)
    elif isinstance(label, OrbitClass):
        orb = label
    else:
        raise LabelError("orbit expects a weight label or orbit string")
    wd = w3_data(params, orb)
    return {
        "orbit": str(orb),
        "members": [str(m) for m in orb.members],
        "w3_delta": _frac(wd.delta),
        "w3_w_rational": _frac(wd.w_rational),
        "w3_w": wd.w_float(params),
    }


def cmd_smatrix_w3(params: LevelParams, args) -> dict:
    return W3SMatrix(params).to_json()


def cmd_kernel_bp(params: LevelParams, args) -> dict:
    a = parse_label(params, args.labels[0])
    b = parse_label(params, args.labels[1])
    if not isinstance(b, StandardLabel):
        raise LabelError("the second kernel argument must be a standard label")
    if isinstance(a, StandardLabel):
        entry = standard_kernel(params, a, b)
        kind = "standard"
    elif isinstance(a, HWLabel):
        entry = type3_kernel(params, a, b)
        kind = "type3"
    else:
        raise LabelError("the first kernel argument must be standard or highest-weight")
    return {
        "kind": kind,
        "a": str(a),
        "b": str(b),
        "value": {"re": entry.value.real, "im": entry.value.imag},
        "w3_factor": {"re": entry.w3_factor.real, "im": entry.w3_factor.imag},
        "phase_exponent": _frac(entry.phase_exponent),
        "denominator": None if entry.denominator is None else entry.denominator.real,
    }


def cmd_fuse(params: LevelParams, args) -> dict:
    a = parse_label(params, args.labels[0])
    b = parse_label(params, args.labels[1])
    product = fuse(params, a, b, args.depth)
    return {"lhs": str(a), "rhs": str(b), "result": product.to_json()}


def cmd_resolve(params: LevelParams, args) -> dict:
    label = parse_label(params, args.labels[0])
    if isinstance(label, RSLabel):
        label = parse_label(params, f"I{args.labels[0]}")
    if not isinstance(label, HWLabel):
        raise LabelError("resolve expects a highest-weight label")
    depth = args.depth or 9 * params.v
    res = resolution(params, label, depth)
    return {"label": str(label), "depth": depth, "terms": res.to_json()}


def cmd_simple_currents(params: LevelParams, args) -> dict:
    currents = simple_currents(params)
    payload = {
        "currents": [
            {"label": str(lab), "j": _frac(j), "delta": _frac(delta)} for lab, j, delta in currents
        ]
    }
    if not currents:
        payload["note"] = "u = 3: both candidates collapse onto the vacuum orbit"
    return payload


def cmd_verify(params: LevelParams, args) -> dict:
    names = [args.suite] if args.suite else sorted(verify_mod.SUITES)
    results = {}
    ok = True
    for name in names:
        if name not in verify_mod.SUITES:
            raise LabelError(f"unknown suite {name!r}; choose from {sorted(verify_mod.SUITES)}")
        passed, detail = verify_mod.SUITES[name](params, args.tol)
        results[name] = {"pass": passed, "detail": detail}
        ok = ok and passed
    return {"ok": ok, "suites": results}


COMMANDS = {
    "list-modules": (cmd_list_modules, 0),
    "orbit": (cmd_orbit, 1),
    "smatrix-w3": (cmd_smatrix_w3, 0),
    "kernel-bp": (cmd_kernel_bp, 2),
    "fuse": (cmd_fuse, 2),
    "resolve": (cmd_resolve, 1),
    "simple-currents": (cmd_simple_currents, 0),
    "verify": (cmd_verify, 0),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpfusion")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, nlabels) in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("u", type=int)
        p.add_argument("v", type=int)
        p.add_argument("labels", nargs="*" if nlabels == 0 else nlabels, metavar="LABEL")
        p.add_argument("--json", action="store_true", default=True, dest="json_out")
        p.add_argument("--table", action="store_true")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--out", default=None)
        if name == "verify":
            p.add_argument("--suite", default=None)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; keep 2 for verification failures only
        return EXIT_DOMAIN if exc.code not in (0, None) else EXIT_OK
    if args.tol is None:
        args.tol = float(os.environ.get("BPFUSION_TOL", DEFAULT_TOL))
    handler, _ = COMMANDS[args.command]
    try:
        params = level_params(args.u, args.v)
        payload = handler(params, args)
    except (ValueError, ZeroDivisionError, NotStabilisedError) as exc:
        # AdmissibilityError, LabelError and GapDivergenceError all land here
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OracleError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _emit(args, payload)
    if args.command == "verify" and not payload["ok"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
