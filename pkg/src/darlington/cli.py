"""Command-line frontend.

Three subcommands operate on JSON problem files:

``check``        validate a realization (minimality, contractivity at
                 infinity, symmetry, Schur property on the axis grid);
``synthesize``   build inner / symmetric / minimal-symmetric extensions;
``scalar``       run the polynomial pipeline on a scalar fraction p1/q.

File format: UTF-8 JSON with keys "A", "B", "C", "D" (nested arrays,
complex entries as [re, im] pairs; bare reals accepted on input),
optional "flags" ({"symmetric": bool, "real": bool}), optional
"tolerances", and for the scalar pipeline coefficient arrays "p1", "q"
in ascending degree order.  Serialization uses Python's shortest
round-tripping float repr, so write-then-read reproduces matrices
bit-exactly.

The base certification tolerance is 1e-7, overridable per call with
--tol or globally with the DARLINGTON_TOL environment variable.
Exit status: 0 when every requested certificate passes, 2 when the
input is not strictly contractive at infinity (apply --mobius), 1 on
any other failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import DarlingtonError, NotContractiveError
from .extension import (
    build_extension,
    frequency_grid,
    innerness_residual,
    symmetric_unitary_extension,
    unitary_axis_residual,
)
from .realization import (
    Realization,
    evaluate,
    kalman_check,
    minimal_realization,
    mobius_precondition,
    symmetrize,
    symmetry_residual,
)
from .riccati import analyze_spectrum, build_hamiltonian, build_hat, solve_extremal
from .reduction import minimize_symmetric
from .scalar import compute_mu, scalar_minimal_extension

__all__ = ["main"]


# ----------------------------------------------------------------- I/O

def _parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"cannot parse complex entry {v!r}")


def _parse_matrix(rows, name: str) -> np.ndarray:
    try:
        return np.array([[_parse_complex(v) for v in row] for row in rows],
                        dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"field {name!r}: {exc}") from exc


def _dump_complex(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def _dump_matrix(M: np.ndarray):
    return [[_dump_complex(z) for z in row] for row in np.atleast_2d(M)]


def read_problem(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    out = {"flags": data.get("flags", {}), "tolerances": data.get("tolerances", {})}
    if all(k in data for k in ("A", "B", "C", "D")):
        A = _parse_matrix(data["A"], "A")
        B = _parse_matrix(data["B"], "B")
        C = _parse_matrix(data["C"], "C")
        D = _parse_matrix(data["D"], "D")
        out["realization"] = Realization(A, B, C, D)
    if "p1" in data and "q" in data:
        out["p1"] = np.array([_parse_complex(v) for v in data["p1"]], dtype=complex)
        out["q"] = np.array([_parse_complex(v) for v in data["q"]], dtype=complex)
    if "realization" not in out and "p1" not in out:
        raise ValueError("problem file needs A/B/C/D matrices or p1/q coefficients")
    return out


def write_realization(path: str, R: Realization, meta: dict | None = None) -> None:
    doc = {"A": _dump_matrix(R.a), "B": _dump_matrix(R.b),
           "C": _dump_matrix(R.c), "D": _dump_matrix(R.d)}
    if meta:
        doc["meta"] = meta
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=1, default=str))
    else:
        for key, val in report.items():
            print(f"{key}: {val}")


def _base_tol(args) -> float:
    if args.tol is not None:
        return float(args.tol)
    env = os.environ.get("DARLINGTON_TOL")
    if env:
        return float(env)
    return 1e-7


# ------------------------------------------------------------ commands

def _schur_report(R: Realization, tol: float) -> dict:
    Rm, cert = minimal_realization(R)
    dnorm = float(np.linalg.norm(R.d, 2))
    stable = bool(Rm.n == 0 or np.max(Rm.poles().real) < -1e-12)
    grid_sup = max(float(np.linalg.norm(evaluate(Rm, 1j * w), 2))
                   for w in frequency_grid())
    schur = stable and grid_sup <= 1.0 + tol
    return {
        "state_dim": R.n,
        "minimal": cert.minimal if R.n == Rm.n else False,
        "mcmillan_degree": cert.mcmillan_degree,
        "d_norm": dnorm,
        "strictly_contractive_at_inf": dnorm < 1.0 - 1e-12,
        "stable": stable,
        "sup_grid_norm": grid_sup,
        "schur_on_grid": schur,
        "symmetric_on_grid": bool(R.outputs == R.inputs
                                  and symmetry_residual(Rm) <= max(tol, 1e-8)),
    }


def cmd_check(args) -> int:
    prob = read_problem(args.file)
    tol = _base_tol(args)
    if "realization" not in prob:
        print("error: check needs a realization (A, B, C, D)", file=sys.stderr)
        return 1
    R = prob["realization"]
    if args.mobius is not None:
        R = mobius_precondition(R, args.mobius)
    rep = _schur_report(R, tol)
    flags = prob["flags"]
    ok = rep["schur_on_grid"]
    if flags.get("symmetric") and not rep["symmetric_on_grid"]:
        rep["flag_mismatch"] = "file claims symmetric but the grid check fails"
        ok = False
    if not rep["strictly_contractive_at_inf"]:
        ws = []
        for w in frequency_grid():
            try:
                if np.linalg.norm(evaluate(R, 1j * w), 2) < 1.0 - 1e-6:
                    ws.append(w)
            except DarlingtonError:
                continue
        hint = f"--mobius {ws[0]:g}" if ws else "--mobius <w0>"
        rep["hint"] = (f"not strictly contractive at infinity; rerun with "
                       f"{hint} to move a point of strict contractivity there")
    _emit(rep, args.json)
    if not ok:
        return 1
    return 0 if rep["strictly_contractive_at_inf"] else 2


def cmd_synthesize(args) -> int:
    prob = read_problem(args.file)
    tol = _base_tol(args)
    if "realization" not in prob:
        print("error: synthesize needs a realization (A, B, C, D)", file=sys.stderr)
        return 1
    R = prob["realization"]
    if args.mobius is not None:
        R = mobius_precondition(R, args.mobius)
    R, _ = minimal_realization(R)
    rep: dict = {"mode": args.mode, "solution": args.solution}
    try:
        if args.mode == "inner":
            hat = build_hat(R)
            spec = analyze_spectrum(build_hamiltonian(hat))
            pmin, pmax = solve_extremal(hat)
            sol = pmin if args.solution == "min" else pmax
            E = build_extension(R, sol)
            out = E.realization
            rep.update({
                "degree": kalman_check(out).mcmillan_degree,
                "kappa": spec.kappa, "n0": spec.n0,
                "innerness_residual": innerness_residual(out),
                "riccati_residual": sol.residual_norm,
            })
            if args.solution == "min":
                zeros = np.linalg.eigvals(sol.z)
                rep["outer_lower_left"] = bool(
                    zeros.size == 0 or np.max(zeros.real) <= 1e-7)
        elif args.mode == "symmetric":
            Rs = symmetrize(R)
            hat = build_hat(Rs)
            spec = analyze_spectrum(build_hamiltonian(hat))
            pmin, pmax = solve_extremal(hat)
            sol = pmin if args.solution == "min" else pmax
            E = build_extension(Rs, sol)
            out, q = symmetric_unitary_extension(E)
            rep.update({
                "degree": kalman_check(out).mcmillan_degree,
                "kappa": spec.kappa, "n0": spec.n0,
                "q_degree": q.degree, "q_inner": q.inner_flag,
                "unitary_axis_residual": unitary_axis_residual(out),
                "symmetry_residual": symmetry_residual(out),
            })
        else:  # minimal-symmetric
            res = minimize_symmetric(R, residual_tol=max(tol, 1e-7))
            out = res.extension
            rep.update({
                "degree": res.degree, "kappa": res.kappa, "n0": res.n0,
                "reductions": len(res.factors),
                "innerness_residual": res.innerness,
                "symmetry_residual": res.symmetry,
                "block_match": res.block_match,
            })
    except NotContractiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        write_realization(args.out, out, meta={k: v for k, v in rep.items()})
        rep["written"] = args.out
    _emit(rep, args.json)
    return 0


def cmd_scalar(args) -> int:
    prob = read_problem(args.file)
    if "p1" not in prob:
        print("error: scalar needs coefficient arrays p1 and q", file=sys.stderr)
        return 1
    fac = compute_mu(prob["p1"], prob["q"])
    ext, degree = scalar_minimal_extension(prob["p1"], prob["q"])
    rep = {
        "mu": [_dump_complex(z) for z in fac.mu],
        "r1": [_dump_complex(z) for z in fac.r1],
        "r2": [_dump_complex(z) for z in fac.r2],
        "constant": fac.constant,
        "kappa": fac.kappa,
        "extension_degree": degree,
        "innerness_residual": innerness_residual(ext),
        "symmetry_residual": symmetry_residual(ext),
    }
    if args.out:
        write_realization(args.out, ext, meta={"kappa": fac.kappa,
                                               "degree": degree})
        rep["written"] = args.out
    _emit(rep, args.json)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="darlington",
        description="Lossless (inner) extensions of rational Schur functions "
                    "and minimal symmetric Darlington synthesis.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="JSON problem file")
        p.add_argument("--tol", type=float, default=None,
                       help="certification tolerance (default 1e-7, or "
                            "DARLINGTON_TOL)")
        p.add_argument("--json", action="store_true",
                       help="emit a machine-readable JSON report")

    p = sub.add_parser("check", help="validate a realization")
    common(p)
    p.add_argument("--mobius", type=float, default=None, metavar="W0",
                   help="apply the change of variable moving i*W0 to infinity")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synthesize", help="build an extension")
    common(p)
    p.add_argument("--mode", choices=["inner", "symmetric", "minimal-symmetric"],
                   default="minimal-symmetric")
    p.add_argument("--solution", choices=["min", "max"], default="min",
                   help="Riccati solution for inner/symmetric modes")
    p.add_argument("--mobius", type=float, default=None, metavar="W0")
    p.add_argument("--out", default=None, help="write the result realization here")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("scalar", help="scalar pipeline on p1/q")
    common(p)
    p.add_argument("--out", default=None, help="write the 2x2 extension here")
    p.set_defaults(func=cmd_scalar)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotContractiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DarlingtonError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
