"""Command-line front end.

Exit codes: 0 success, 1 failed verification, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import kato
from .linalg import MatrixFormatError, QArray, load_matrix
from .models import MODEL_KINDS, model_from_name, model_membership, truncation_report
from .quaternion import I_UNIT, J_UNIT, K_UNIT, EigenSphere, ImaginaryUnit, parse_quaternion
from .scan import MAX_RESOLUTION, QUANTITIES, scan, write_csv, write_pgm
from .slice_regular import local_spectrum, root_subspaces, svep_report
from .spectrum import SpectralError, s_spectrum
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path: str) -> QArray:
    try:
        return load_matrix(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_slice(text: str) -> ImaginaryUnit:
    named = {"i": I_UNIT, "j": J_UNIT, "k": K_UNIT}
    if text in named:
        return named[text]
    parts = text.split(",")
    try:
        xyz = [float(p) for p in parts]
    except ValueError:
        xyz = []
    if len(xyz) != 3 or not all(map(math.isfinite, xyz)):
        raise InputError(f"--slice must be i, j, k or x,y,z; got {text!r}")
    r = math.sqrt(sum(v * v for v in xyz))
    if r == 0.0:
        raise InputError("--slice direction must be nonzero")
    return ImaginaryUnit(*(v / r for v in xyz))


def parse_center(text: str) -> tuple[float, float]:
    try:
        x, y = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise InputError(f"--center must be 'x,y'; got {text!r}") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InputError("--center must be finite")
    return x, y


# commands ---------------------------------------------------------------
def cmd_spectrum(args) -> int:
    A = _load(args.input)
    _emit(_dumps(s_spectrum(A, args.tol).to_json()), args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    """Spectral report plus Kato decompositions and local spectra."""
    A = _load(args.input)
    out = s_spectrum(A, args.tol).to_json()
    decomp = []
    for entry in out["spheres"]:
        q = EigenSphere(entry["re"], entry["im"]).point()
        decomp.append({"sphere": [entry["re"], entry["im"]],
                       "kato_kind": str(kato.kato_kind(A, q)),
                       "gkd": kato.gkd(A, q).to_json()})
    out["kato_decompositions"] = decomp
    n = A.shape[0]
    roots = root_subspaces(A)
    out["local_spectra"] = [
        {"vector": f"e{k + 1}",
         "spheres": [[s.re, s.im] for s in local_spectrum(A, QArray.basis_vector(n, k), roots=roots).spheres]}
        for k in range(n)
    ]
    out["svep"] = svep_report(A)
    _emit(_dumps(out), args.output)
    return EXIT_OK


def cmd_scan(args) -> int:
    A = _load(args.input)
    if not (1 <= args.res <= MAX_RESOLUTION):
        raise InputError(f"--res must be between 1 and {MAX_RESOLUTION}")
    if not (args.window > 0 and math.isfinite(args.window)):
        raise InputError("--window must be a positive number")
    unit = parse_slice(args.slice)
    center = parse_center(args.center)
    grid = scan(A, unit, center, args.window, args.res, args.quantity)
    base = args.output
    with open(base + ".csv", "w", encoding="utf-8", newline="\n") as fh:
        write_csv(grid, fh)
    with open(base + ".pgm", "w", encoding="utf-8", newline="\n") as fh:
        write_pgm(grid, fh)
    r, c = grid.argmin()
    sys.stderr.write(f"minimum {grid.values[r, c]:.3e} at x={grid.xs[c]:.6g}, y={grid.ys[r]:.6g}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    tally = run_suite(args.suite, seed=args.seed, trials=args.trials, fault=args.inject_fault)
    sys.stdout.write(f"suite {args.suite}, seed {args.seed}, trials {args.trials}\n")
    sys.stdout.write(tally.table() + "\n")
    failed = tally.failures()
    sys.stdout.write("all invariants hold\n" if not failed else f"FAILED: {', '.join(failed)}\n")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_model(args) -> int:
    try:
        m = model_from_name(args.name)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc
    try:
        q = parse_quaternion(args.query)
    except ValueError as exc:
        raise InputError(f"--query: {exc}") from exc
    out = {
        "model": m.name,
        "query": q.to_array().tolist(),
        "memberships": {k: model_membership(m, q, k) for k in MODEL_KINDS},
        "descriptors": {"r_s": m.r_s, "lower_index": m.lower_index, "invertible": m.invertible},
    }
    if args.truncate is not None:
        if args.truncate < 1:
            raise InputError("--truncate must be a positive integer")
        out["truncation_report"] = truncation_report(m, args.truncate, [q])
    _emit(_dumps(out), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qkato", description="S-spectrum and Kato tools for quaternion matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="spectral report of a matrix file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output")
    sp.add_argument("--tol", type=float, default=None, help="sphere clustering radius")
    sp.set_defaults(func=cmd_spectrum)

    rp = sub.add_parser("report", help="spectral report with Kato decompositions and local spectra")
    rp.add_argument("--input", required=True)
    rp.add_argument("--output")
    rp.add_argument("--tol", type=float, default=None)
    rp.set_defaults(func=cmd_report)

    sc = sub.add_parser("scan", help="pseudo-resolvent landscape on a slice")
    sc.add_argument("--input", required=True)
    sc.add_argument("--output", required=True, help="base path; writes BASE.csv and BASE.pgm")
    sc.add_argument("--slice", default="i")
    sc.add_argument("--center", default="0,0")
    sc.add_argument("--window", type=float, default=4.0)
    sc.add_argument("--res", type=int, default=64)
    sc.add_argument("--quantity", choices=QUANTITIES, default="min-singular")
    sc.set_defaults(func=cmd_scan)

    vp = sub.add_parser("verify", help="run the invariant suites")
    vp.add_argument("--suite", choices=sorted(SUITES), default="all")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--trials", type=int, default=20)
    vp.add_argument("--inject-fault", choices=["gauge"], default=None, help=argparse.SUPPRESS)
    vp.set_defaults(func=cmd_verify)

    mp = sub.add_parser("model", help="closed-form memberships of a canonical operator")
    mp.add_argument("name", help="unilateral-shift, bilateral-shift, weighted-shift:harmonic or diagonal:FILE")
    mp.add_argument("--query", required=True)
    mp.add_argument("--truncate", type=int, default=None)
    mp.add_argument("--output")
    mp.set_defaults(func=cmd_model)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.trials < 1:
        sys.stderr.write("qkato: --trials must be positive\n")
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"qkato: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"qkato: {exc}\n")
        return EXIT_INPUT
    except SpectralError as exc:
        sys.stderr.write(f"qkato: spectral computation failed: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
