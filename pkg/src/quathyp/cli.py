"""Command-line front end: ``quathyp eval ...`` and ``quathyp verify ...``."""
from __future__ import annotations

import argparse
import csv
import sys
from typing import List, Optional

import numpy as np

from . import specfun as S
from .errors import QuatHypError, SpectralPole
from .group import GroupContext

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_POLE = 3


class UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive linspace), a comma list, or one number."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(a, b, n)
        return np.array([_number(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def _number(x: str):
    x = x.strip()
    try:
        return float(x)
    except ValueError:
        return complex(x.replace("i", "j"))


def _fmt(x) -> str:
    x = complex(x)
    return repr(x.real) if x.imag == 0 else repr(x)


def _params(args) -> S.JacobiParams:
    if args.alpha is not None and args.beta is not None:
        return S.JacobiParams(args.alpha, args.beta)
    if args.n is not None and args.nu is not None:
        return S.nu_params(GroupContext(args.n), args.nu)
    raise UsageError("need --alpha and --beta, or --n and --nu")


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join(missing))


def cmd_eval(args, out=sys.stdout) -> int:
    _need(args, "lam")
    lams = parse_grid(args.lam)
    rows = []
    what = args.function
    if what in ("c", "b"):
        for lam in lams:
            if what == "c":
                if args.alpha is not None and args.beta is not None:
                    val = S.c_ab(_params(args), lam)
                else:
                    _need(args, "n", "nu")
                    val = S.c_nu(GroupContext(args.n), args.nu, lam)
            else:
                _need(args, "n", "nu")
                if complex(lam).imag != 0:
                    raise UsageError("b takes real lambda")
                val = S.b_nu(GroupContext(args.n), args.nu, float(np.real(lam)))
            rows.append(("", lam, val))
    else:
        _need(args, "t")
        ts = parse_grid(args.t)
        if np.iscomplexobj(ts):
            raise UsageError("t must be real")
        for lam in lams:
            if what == "phi":
                vals = S.jacobi_phi(_params(args), lam, ts)
            elif what == "psi":
                vals = S.jacobi_psi(_params(args), lam, ts)
            else:
                _need(args, "n", "nu")
                vals = S.phi_nu(GroupContext(args.n), args.nu, lam, ts)
            for t, v in zip(ts, np.atleast_1d(vals)):
                rows.append((repr(float(t)), lam, v))
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(["t", "lambda", "re", "im"])
    for t, lam, v in rows:
        v = complex(v)
        wr.writerow([t, _fmt(lam), repr(v.real), repr(v.imag)])
    return 0


def cmd_verify(args, out=sys.stdout) -> int:
    from .verify import SUITES, VerifyConfig, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {', '.join(list(SUITES) + ['all'])}", file=sys.stderr)
        return EXIT_USAGE
    lams = tuple(float(np.real(x)) for x in parse_grid(args.lam)) if args.lam else (1.0,)
    radii = tuple(float(x) for x in parse_grid(args.R)) if args.R else (5.0, 10.0, 20.0, 40.0)
    cfg = VerifyConfig(
        n=args.n if args.n is not None else 1,
        nu=args.nu if args.nu is not None else 1,
        lambdas=lams,
        radii=radii,
        seed=args.seed,
        k_samples=args.k_samples,
        cases=args.cases,
    )
    report = run_suite(args.suite, cfg)
    path = args.out or f"quathyp-verify-{args.suite}.json"
    text = report.to_json()
    if path == "-":
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(report.summary(), file=out)
        print(f"report written to {path}", file=out)
    return 0 if report.passed else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quathyp", description="Spherical functions and transforms on quaternionic hyperbolic space.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a special function on a grid (CSV t,lambda,re,im)")
    e.add_argument("function", choices=["phi", "psi", "c", "b", "phinu"])
    e.add_argument("--n", type=int)
    e.add_argument("--nu", type=int)
    e.add_argument("--alpha", type=float)
    e.add_argument("--beta", type=float)
    e.add_argument("--lambda", dest="lam", help="value, comma list or start:stop:count")
    e.add_argument("--t", help="value, comma list or start:stop:count")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    v.add_argument("suite", help="group, specfun, jacobi, poisson, fourier, keylemma or all")
    v.add_argument("--n", type=int)
    v.add_argument("--nu", type=int)
    v.add_argument("--lambda", dest="lam", help="comma list of spectral parameters")
    v.add_argument("--R", help="comma list of ball radii")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--k-samples", type=int, default=200_000)
    v.add_argument("--cases", type=int, default=1000)
    v.add_argument("--out", help="report path, '-' for stdout (default quathyp-verify-<suite>.json)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quathyp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpectralPole as exc:
        print(f"quathyp: spectral pole: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (QuatHypError, ValueError) as exc:
        print(f"quathyp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
