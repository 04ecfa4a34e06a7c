"""Command-line entry point: ``bogomolov <command> [options]``.

Exit codes: 0 verified, 1 verification failure, 2 budget exceeded, 3 bad
parameters.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import experiments as ex
from .errors import BudgetExceeded, ParameterError
from .grassmannian import DEFAULT_BUDGET
from .linalg import Field
from .report import census_results, dumps, make_report, to_csv

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_PARAMS = 0, 1, 2, 3


def _common(sp):
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--d", type=int, default=4)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--out", default=None, help="write the report here instead of stdout")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--omit-runtime", action="store_true", help="report runtime_ms as null so reruns compare byte for byte")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bogomolov", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("census", help="closure statistics over Gr(r, Lambda^2 F_p^d)"))
    _common(sub.add_parser("verify-d4", help="closed-form checks at d = 4"))
    _common(sub.add_parser("sample", help="Monte-Carlo fraction with bound comparison"))
    sp = sub.add_parser("loggeneric", help="parameters d = floor(alpha n), r = C(d,2) + d - n")
    _common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=Fraction, required=True)
    _common(sub.add_parser("torsion-example", help="the SK1 witness over Z_p"))
    sp = sub.add_parser("submersion-check", help="rank of dPsi at the canonical tuple")
    _common(sp)
    sp.add_argument("--field", default="rational", help="'rational' or a prime")
    sp.add_argument("--lam-seed", type=int, default=None)
    return ap


def _run(args) -> tuple[dict, bool]:
    cmd = args.command
    params = {"p": args.p, "d": args.d, "r": args.r}
    t0 = time.perf_counter()
    bounds, seed, ok = {}, None, True
    if cmd == "census":
        if args.r is None:
            raise ParameterError("--r is required")
        rep = ex.census(args.p, args.d, args.r, args.mode, args.trials, args.seed, args.budget)
        params["mode"] = args.mode
        if args.mode == "sampled":
            params["trials"] = args.trials
            seed = args.seed
        results = census_results(rep)
    elif cmd == "verify-d4":
        checks = ex.verify_d4(args.p, seed=args.seed, budget=args.budget)
        params = {"p": args.p, "d": 4}
        results = {"checks": [{"name": c.name, "passed": c.passed, **c.detail} for c in checks]}
        ok = all(c.passed for c in checks)
        seed = args.seed
    elif cmd == "sample":
        if args.r is None:
            raise ParameterError("--r is required")
        rep, bound, info = ex.sample_experiment(args.p, args.d, args.r, args.trials, args.seed)
        params["trials"] = args.trials
        results = census_results(rep) | {k: v for k, v in info.items()}
        if bound:
            bounds = bound
        seed = args.seed
    elif cmd == "loggeneric":
        out = ex.loggeneric(args.p, args.n, args.alpha, args.trials, args.seed)
        lp = out["params"]
        params = {"p": args.p, "n": args.n, "alpha": args.alpha, "d": lp.d, "r": lp.r, "rho": lp.rho, "trials": args.trials}
        results = census_results(out["report"]) | {
            "fraction_b0_positive": out["fraction_b0_positive"],
            "construction": out["construction"],
        }
        bounds = {"count_exponent": out["count_exponent"]}
        if "lemma_bound" in out:
            bounds["lemma_bound"] = out["lemma_bound"]
        seed = args.seed
    elif cmd == "torsion-example":
        w = ex.torsion_example(args.p)
        params = {"p": args.p}
        results = {
            "quadric": {"a^2": w.quadric[0], "ab": w.quadric[1], "b^2": w.quadric[2]},
            "directions": w.directions,
            "divisors": w.divisors,
            "sk1_order": w.sk1_order,
            "sk1_trivial_over_Qp": w.sk1_trivial_over_Qp,
        }
        ok = w.sk1_order == args.p and w.sk1_trivial_over_Qp
    elif cmd == "submersion-check":
        field = Field.rational() if args.field == "rational" else Field.prime(int(args.field))
        out = ex.submersion_check(args.d, field, args.lam_seed, args.trials if args.mode == "sampled" else 0, args.seed, args.r)
        rep = out["report"]
        params = {"d": args.d, "field": repr(field), "r": out["tuple_r"], "lam_seed": args.lam_seed}
        results = {
            "rank": rep.rank,
            "domain_dim": rep.domain_dim,
            "codomain_dim": rep.codomain_dim,
            "is_submersion": rep.is_submersion,
            "is_immersion": rep.is_immersion,
            "condition_check": list(rep.condition_check),
            "predicted": out["predicted"],
            "random": out["random"],
        }
        ok = out["ok"]
        seed = args.seed
    else:  # pragma: no cover - argparse rejects unknown commands
        raise ParameterError(cmd)
    runtime = None if args.omit_runtime else round((time.perf_counter() - t0) * 1e3, 3)
    return make_report(cmd, params, results, bounds, seed, runtime), ok


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, ok = _run(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ParameterError as e:
        print(f"bad parameters: {e}", file=sys.stderr)
        return EXIT_PARAMS
    text = dumps(report) if args.format == "json" else to_csv(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
