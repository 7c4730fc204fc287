"""Regenerate golden/*.json.

Special-function entries are cross-checked against a 50-digit mpmath
evaluation before freezing; constants entries are quadrature-derived (no
closed form exists away from mu = 0) and labeled as such. Run from the
repository root:  python tools/gen_goldens.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import mpmath as mp

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from hardyfrac.cli import _sig15  # noqa: E402
from hardyfrac.constants import csmu  # noqa: E402
from hardyfrac.exponents import tau_pair  # noqa: E402
from hardyfrac.special import ProblemParams, c_s, cns, mu0, riesz_delta_const  # noqa: E402

mp.mp.dps = 50

CASES = [
    (2, 0.5, -0.75),
    (2, 0.5, 0.3),
    (2, 0.25, -1.2),
    (3, 0.5, -1.25),
    (3, 0.75, -0.7),
    (4, 0.35, -2.0),
    (10, 0.95, -4.05),
]

CONST_CASES = [
    (2, 0.5, 0.0),
    (2, 0.5, 1.0),
    (2, 0.5, -0.1),
    (3, 0.5, 0.0),
    (3, 0.75, 0.5),
    (2, 0.25, 0.0),
]


def mp_c_s(tau, N, s):
    tau, N, s = mp.mpf(tau), mp.mpf(N), mp.mpf(s)
    return (2 ** (2 * s) * mp.gamma((N + tau) / 2) * mp.gamma((2 * s - tau) / 2)
            / (mp.gamma(-tau / 2) * mp.gamma((N - 2 * s + tau) / 2)))


def mp_mu0(N, s):
    N, s = mp.mpf(N), mp.mpf(s)
    return -(2 ** (2 * s)) * mp.gamma((N + 2 * s) / 4) ** 2 / mp.gamma((N - 2 * s) / 4) ** 2


def mp_cns(N, s):
    N, s = mp.mpf(N), mp.mpf(s)
    return 2 ** (2 * s) * mp.pi ** (-N / 2) * s * mp.gamma((N + 2 * s) / 2) / mp.gamma(1 - s)


def mp_riesz(N, s):
    N, s = mp.mpf(N), mp.mpf(s)
    return 2 ** (2 * s) * mp.pi ** (N / 2) * mp.gamma(s) / mp.gamma((N - 2 * s) / 2)


def check(name, got, oracle, rtol=5e-14):
    rel = abs(got - float(oracle)) / max(abs(float(oracle)), 1e-300)
    if rel > rtol:
        raise SystemExit(f"oracle mismatch for {name}: {got} vs {oracle} (rel {rel:.2e})")


def main() -> None:
    root = Path(__file__).resolve().parents[1]
    entries = []
    for N, s, tau in CASES:
        p = ProblemParams(N, s)
        vals = {
            "mu0": mu0(p),
            "C_Ns": cns(p),
            "riesz_delta": riesz_delta_const(p),
            "c_s": c_s(tau, p),
        }
        check(f"mu0({N},{s})", vals["mu0"], mp_mu0(N, s))
        check(f"C_Ns({N},{s})", vals["C_Ns"], mp_cns(N, s))
        check(f"riesz({N},{s})", vals["riesz_delta"], mp_riesz(N, s))
        check(f"c_s({tau};{N},{s})", vals["c_s"], mp_c_s(tau, N, s))
        entries.append({
            "config": {"N": N, "s": s, "tau": tau},
            "outputs": {k: _sig15(v) for k, v in vals.items()},
        })
    (root / "golden" / "special.json").write_text(
        json.dumps({"schema": 1, "kind": "special",
                    "note": "15-significant-digit frozen values, verified "
                            "against a 50-digit Gamma oracle at generation",
                    "entries": entries}, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )

    centries = []
    for N, s, mu in CONST_CASES:
        p = ProblemParams(N, s, mu)
        pair = tau_pair(p)
        centries.append({
            "config": {"N": N, "s": s, "mu": mu},
            "outputs": {
                "c_smu": _sig15(csmu(p)),
                "tau_minus": _sig15(pair.tau_minus),
                "tau_plus": _sig15(pair.tau_plus),
            },
        })
    (root / "golden" / "constants.json").write_text(
        json.dumps({"schema": 1, "kind": "constants",
                    "note": "quadrature-derived digits; no closed form exists "
                            "for mu != 0, the mu = 0 rows equal the Riesz "
                            "delta constant",
                    "entries": centries}, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    print("golden files written")


if __name__ == "__main__":
    main()
