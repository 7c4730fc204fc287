"""Command-line front end: reports, CSV/JSON artifacts, golden-file regression.

Every run writes a deterministic report (sorted keys, repr-formatted floats,
no timestamps), so repeated runs with the same configuration are
byte-identical. Exit status: 0 when all verdicts pass, 1 when any check
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .constants import cs0, csmu
from .exponents import SubcriticalMuError, tau_pair
from .identity import verify_theorem_b
from .kernelops import DEFAULT_QUAD
from .probe import delta_sequence_probe, divergence_probe, subcritical_mu_probe
from .profiles import PlateauBump, PowerLogProfile, constant_profile
from .radial_kernel import gamma_profile, phi_profile
from .solver import DirichletProblem, build_phi_omega, solve
from .special import ProblemParams, cns, mu0, riesz_delta_const

SCHEMA = 1
USAGE_ERROR = 2


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HARDYFRAC_THREADS", "1")))
    except ValueError:
        return 1


def _emit(payload: dict, out: str | None, fmt: str = "json") -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _sig15(x: float) -> str:
    return f"{x:.14e}"


def _parse_source(spec_str: str):
    kind, _, rest = spec_str.partition(":")
    if kind == "const":
        return constant_profile(float(rest or "1"))
    if kind == "power":
        amp, _, tau = rest.partition(",")
        return PowerLogProfile(float(amp), float(tau))
    if kind == "bump":
        return PlateauBump(R=float(rest or "0.25"))
    if kind == "zero":
        return None
    raise argparse.ArgumentTypeError(f"unknown source {spec_str!r}")


def _parse_xi(spec_str: str):
    kind, _, rest = spec_str.partition(":")
    if kind == "plateau":
        return PlateauBump(R=float(rest or "0.25"))
    raise argparse.ArgumentTypeError(f"unknown test function {spec_str!r}")


def _parse_grid(spec_str: str) -> np.ndarray:
    try:
        a, b, n = spec_str.split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must be a:b:n, got {spec_str!r}") from exc


# ------------------------------------------------------------- subcommands


def _cmd_constants(args) -> int:
    p = ProblemParams(args.N, args.s, args.mu)
    pair = tau_pair(p)
    c_mu = csmu(p)
    c_0 = cs0(p)
    riesz = riesz_delta_const(p)
    payload = {
        "schema": SCHEMA,
        "config": {"subcommand": "constants", "N": args.N, "s": args.s, "mu": args.mu},
        "mu0": mu0(p),
        "tau_minus": pair.tau_minus,
        "tau_plus": pair.tau_plus,
        "degenerate": pair.degenerate,
        "C_Ns": cns(p),
        "c_smu": c_mu,
        "c_s0": c_0,
        "riesz_delta": riesz,
        "cross_check_rel_err": abs(c_0 - riesz) / riesz,
    }
    _emit(payload, args.out)
    return 0 if payload["cross_check_rel_err"] <= 5e-3 else 1


def _cmd_exponents(args) -> int:
    p0 = ProblemParams(args.N, args.s, 0.0)
    m0 = mu0(p0)
    grid = _parse_grid(args.mu_grid)

    def row(mu: float) -> str:
        try:
            pair = tau_pair(p0.with_mu(float(mu)))
            return f"{mu!r},{pair.tau_minus!r},{pair.tau_plus!r},{int(pair.degenerate)},ok"
        except SubcriticalMuError:
            return f"{mu!r},nan,nan,0,below_mu0"

    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        rows = list(ex.map(row, grid.tolist()))
    text = "mu,tau_minus,tau_plus,degenerate,status\n" + "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify_identity(args) -> int:
    p = ProblemParams(args.N, args.s, args.mu)
    xi = _parse_xi(args.xi)
    rep = verify_theorem_b(xi, p, tol=args.tol)
    payload = {
        "schema": SCHEMA,
        "config": {
            "subcommand": "verify-identity", "N": args.N, "s": args.s,
            "mu": args.mu, "xi": args.xi, "tol": args.tol,
        },
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "rel_err": rep.rel_err,
        "tol": rep.tol,
        "verdict": rep.verdict,
        "quad_budget": rep.quad_budget,
    }
    _emit(payload, args.out)
    return 0 if rep.passed else 1


def _solve_payload(rep, config: dict) -> dict:
    return {
        "schema": SCHEMA,
        "config": config,
        "residual_max": rep.residual_max,
        "singular_limit": rep.singular_limit,
        "gamma_ratio_max": rep.gamma_ratio_max,
        "l1_lambda_norm": rep.l1_lambda_norm,
        "l1_gamma_norm_f": rep.l1_gamma_norm_f,
        "positivity_min": rep.positivity_min,
        "cond": rep.cond,
        "n_nodes": int(len(rep.grid)),
    }


def _dump_solution_csv(rep, path: str) -> None:
    p = rep.params
    r = rep.grid
    u = rep.u.value(r)
    phi = phi_profile(p).value(r)
    gam = gamma_profile(p).value(r)
    lines = ["r,u,u_over_phi,u_over_gamma"]
    lines += [f"{ri!r},{ui!r},{(ui / pi)!r},{(ui / gi)!r}"
              for ri, ui, pi, gi in zip(r, u, phi, gam)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_solve(args) -> int:
    p = ProblemParams(args.N, args.s, args.mu)
    f = _parse_source(args.f)
    prob = DirichletProblem(p, f, k=args.k, rho=args.rho)
    rep = solve(prob, n_nodes=args.nodes)
    config = {
        "subcommand": "solve", "N": args.N, "s": args.s, "mu": args.mu,
        "k": args.k, "f": args.f, "rho": args.rho, "nodes": args.nodes,
    }
    _emit(_solve_payload(rep, config), args.out)
    if args.csv:
        _dump_solution_csv(rep, args.csv)
    return 0


def _cmd_fundamental(args) -> int:
    p = ProblemParams(args.N, args.s, args.mu)
    rep = build_phi_omega(p, n_nodes=args.nodes)
    config = {
        "subcommand": "fundamental", "N": args.N, "s": args.s,
        "mu": args.mu, "nodes": args.nodes,
    }
    payload = _solve_payload(rep, config)
    ok = (abs(rep.singular_limit - 1.0) <= 0.02
          and rep.positivity_min >= -1e-6 * max(abs(rep.positivity_min), 1.0))
    payload["verdict"] = "pass" if ok else "fail"
    _emit(payload, args.out)
    if args.csv:
        _dump_solution_csv(rep, args.csv)
    return 0 if ok else 1


def _cmd_probe(args) -> int:
    p = ProblemParams(args.N, args.s, args.mu)
    if args.mode == "delta":
        r_seq = np.geomspace(0.2, 0.2 * 0.5 ** (args.levels - 1), args.levels)
        rep = delta_sequence_probe(p, r_seq)
        expected = "convergent"
    elif args.mode == "divergence":
        a = args.exponent if args.exponent is not None else p.N + tau_pair(p).tau_plus
        rep = divergence_probe(p, a, levels=[4.0**k for k in range(1, args.levels + 1)])
        expected = "divergent" if rep.extra["analytic_divergent"] else "convergent"
    elif args.mode == "subcritical":
        eps = np.geomspace(0.1, 0.1 * 0.55 ** (args.levels - 1), args.levels)
        rep = subcritical_mu_probe(p, eps)
        expected = "divergent" if p.mu < mu0(p) else None
    else:  # pragma: no cover - argparse restricts choices
        return USAGE_ERROR
    payload = {
        "schema": SCHEMA,
        "config": {
            "subcommand": "probe", "mode": args.mode, "N": args.N, "s": args.s,
            "mu": args.mu, "levels": args.levels,
        },
        "levels": [float(x) for x in rep.levels],
        "norms": [float(x) for x in rep.norms],
        "masses": [float(x) for x in rep.masses],
        "verdict": rep.verdict,
        "growth_fit": rep.growth_fit if np.isfinite(rep.growth_fit) else None,
        "extra": rep.extra,
    }
    _emit(payload, args.out)
    if expected is None:
        return 0
    return 0 if rep.verdict == expected else 1


def _cmd_regress(args) -> int:
    golden_dir = Path(args.golden_dir)
    files = sorted(golden_dir.glob("*.json"))
    if not files:
        sys.stderr.write(f"no golden files under {golden_dir}\n")
        return 1
    failures = []
    for path in files:
        data = json.loads(path.read_text(encoding="utf-8"))
        for entry in data.get("entries", []):
            cfg = entry["config"]
            p = ProblemParams(int(cfg["N"]), float(cfg["s"]), float(cfg.get("mu", 0.0)))
            got = _regress_outputs(data["kind"], cfg, p)
            for key, want in entry["outputs"].items():
                if got.get(key) != want:
                    failures.append(f"{path.name}:{cfg}: {key} = {got.get(key)} != {want}")
    for line in failures:
        sys.stderr.write(line + "\n")
    sys.stdout.write(
        json.dumps({"schema": SCHEMA, "checked": len(files),
                    "failures": len(failures)}, sort_keys=True) + "\n"
    )
    return 1 if failures else 0


def _regress_outputs(kind: str, cfg: dict, p: ProblemParams) -> dict:
    from .special import c_s

    if kind == "special":
        out = {
            "mu0": _sig15(mu0(p)),
            "C_Ns": _sig15(cns(p)),
            "riesz_delta": _sig15(riesz_delta_const(p)),
        }
        if "tau" in cfg:
            out["c_s"] = _sig15(c_s(float(cfg["tau"]), p))
        return out
    if kind == "constants":
        pair = tau_pair(p)
        return {
            "c_smu": _sig15(csmu(p)),
            "tau_minus": _sig15(pair.tau_minus),
            "tau_plus": _sig15(pair.tau_plus),
        }
    raise ValueError(f"unknown golden kind {kind!r}")


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hardyfrac",
        description="Fractional Hardy operator toolkit: constants, identities, "
                    "singular Dirichlet solver, nonexistence probes.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(s, mu_default=0.0):
        s.add_argument("--N", type=int, required=True)
        s.add_argument("--s", type=float, required=True)
        s.add_argument("--mu", type=float, default=mu_default)
        s.add_argument("--out", type=str, default=None)

    c = sub.add_parser("constants", help="closed-form and quadrature constants")
    common(c)
    c.set_defaults(fn=_cmd_constants)

    e = sub.add_parser("exponents", help="tau exponent table over a mu grid")
    e.add_argument("--N", type=int, required=True)
    e.add_argument("--s", type=float, required=True)
    e.add_argument("--mu-grid", type=str, required=True, metavar="a:b:n")
    e.add_argument("--out", type=str, default=None)
    e.set_defaults(fn=_cmd_exponents)

    v = sub.add_parser("verify-identity", help="distributional identity check")
    common(v)
    v.add_argument("--xi", type=str, default="plateau:0.25")
    v.add_argument("--tol", type=float, default=None)
    v.set_defaults(fn=_cmd_verify_identity)

    so = sub.add_parser("solve", help="singular Dirichlet solve on the unit ball")
    common(so)
    so.add_argument("--k", type=float, default=0.0)
    so.add_argument("--f", type=str, default="const:1")
    so.add_argument("--rho", type=float, default=0.0)
    so.add_argument("--nodes", type=int, default=256)
    so.add_argument("--csv", type=str, default=None)
    so.set_defaults(fn=_cmd_solve)

    fu = sub.add_parser("fundamental", help="bounded-domain fundamental solution")
    common(fu)
    fu.add_argument("--nodes", type=int, default=192)
    fu.add_argument("--csv", type=str, default=None)
    fu.set_defaults(fn=_cmd_fundamental)

    pr = sub.add_parser("probe", help="nonexistence probes")
    pr.add_argument("mode", choices=("delta", "divergence", "subcritical"))
    common(pr)
    pr.add_argument("--levels", type=int, default=5)
    pr.add_argument("--exponent", type=float, default=None)
    pr.set_defaults(fn=_cmd_probe)

    rg = sub.add_parser("regress", help="replay all golden files")
    rg.add_argument("--golden-dir", type=str, default="golden")
    rg.set_defaults(fn=_cmd_regress)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, SubcriticalMuError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return USAGE_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
