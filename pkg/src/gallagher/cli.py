"""Batch runner: ``gallagher {verify,sweep,selberg,sieve,plancherel} ...``.

Options may also come from a JSON file given with ``--config``; flags on the
command line win. Output is written by one writer in instance order, so a
given configuration always produces the same bytes.

Exit status: 0 all asserted checks passed, 1 some check failed (a JSON
failure record goes to stderr), 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any, Callable

from ._io import dumps_json, format_float
from .arith import balance, constant, moebius, sieve_dk
from .meansquare import SelbergWindow
from .sums import random_dirichlet
from .verify import (
    SELBERG_CAP,
    THEOREM_CAP,
    SweepConfig,
    VerificationReport,
    check_cl_selberg,
    check_corollary,
    check_gallagher_series,
    emit_plot_data,
    estimate_constant,
    instance_rng,
    lemma_suite,
    plancherel_suite,
    table_to_csv,
    theorem_suite,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, key: str, message: str):
        super().__init__(f"--{key.replace('_', '-')}: {message}")
        self.key = key


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ints(text) -> list[int]:
    return [int(x) for x in _floats(text)]


# default values per command; None means "required"
DEFAULTS: dict[str, dict[str, Any]] = {
    "verify": {"inequality": "star-tilde", "theta": 0.25, "T": 50.0, "trials": 100, "seed": 0,
               "max_terms": 30, "max_frequency": 10.0, "n_max": 1000, "kappa": 1.0,
               "cap": THEOREM_CAP, "N1": 1, "N2": 500, "epsilon": 0.1, "b": "mobius"},
    "sweep": {"inequality": "star-tilde", "thetas": "0.1,0.25,0.5,0.9", "Ts": "10",
              "n_terms": "10", "seeds": 20, "seed": 0, "max_frequency": 10.0, "kappa": 1.0},
    "selberg": {"k": 3, "limit": 30000, "N": 10000, "h": "10,50,100", "degree": None,
                "cap": SELBERG_CAP, "seed": 0},
    "sieve": {"function": "dk", "k": 3, "limit": 100, "seed": 0},
    "plancherel": {"trials": 20, "seed": 0, "max_terms": 8, "max_frequency": 2.0},
}

CHECKS: dict[str, Callable[[Any], bool]] = {
    "theta": lambda v: 0 < v < 1,
    "T": lambda v: v > 0,
    "trials": lambda v: v >= 0,
    "seeds": lambda v: v >= 0,
    "max_terms": lambda v: v >= 1,
    "max_frequency": lambda v: v > 0,
    "n_max": lambda v: v >= 1,
    "kappa": lambda v: v >= 0,
    "cap": lambda v: v > 0,
    "N1": lambda v: v >= 1,
    "N2": lambda v: v >= 1,
    "epsilon": lambda v: v > 0,
    "k": lambda v: v >= 1,
    "limit": lambda v: v >= 1,
    "N": lambda v: v >= 1,
    "degree": lambda v: v is None or v >= 0,
}

INTS = {"trials", "seeds", "seed", "max_terms", "n_max", "N1", "N2", "k", "limit", "N", "degree"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gallagher", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with option values")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=["json", "csv"])
        sp.add_argument("--seed", type=int)

    v = sub.add_parser("verify", help="randomized checks of one inequality")
    common(v)
    v.add_argument("--inequality", choices=["star", "star-tilde", "star-star", "star-star-tilde",
                                            "corollary"])
    v.add_argument("--theta", type=float)
    v.add_argument("--T", type=float)
    v.add_argument("--trials", type=int)
    v.add_argument("--max-terms", type=int)
    v.add_argument("--max-frequency", type=float)
    v.add_argument("--n-max", type=int)
    v.add_argument("--kappa", type=float)
    v.add_argument("--cap", type=float)
    v.add_argument("--N1", type=int)
    v.add_argument("--N2", type=int)
    v.add_argument("--epsilon", type=float)
    v.add_argument("--b", choices=["mobius", "one"])

    s = sub.add_parser("sweep", help="max observed ratio over a parameter grid")
    common(s)
    s.add_argument("--inequality", choices=["star", "star-tilde", "star-star-tilde"])
    s.add_argument("--thetas")
    s.add_argument("--Ts")
    s.add_argument("--n-terms")
    s.add_argument("--seeds", type=int)
    s.add_argument("--max-frequency", type=float)
    s.add_argument("--kappa", type=float)

    sb = sub.add_parser("selberg", help="modified vs plain Selberg integral of balanced d_k")
    common(sb)
    sb.add_argument("--k", type=int)
    sb.add_argument("--limit", type=int)
    sb.add_argument("--N", type=int)
    sb.add_argument("--h")
    sb.add_argument("--degree", type=int)
    sb.add_argument("--cap", type=float)

    sv = sub.add_parser("sieve", help="export d_k or the Moebius function as CSV")
    common(sv)
    sv.add_argument("--function", choices=["dk", "mobius"])
    sv.add_argument("--k", type=int)
    sv.add_argument("--limit", type=int)

    pl = sub.add_parser("plancherel", help="Plancherel audit on random sums")
    common(pl)
    pl.add_argument("--trials", type=int)
    pl.add_argument("--max-terms", type=int)
    pl.add_argument("--max-frequency", type=float)
    return p


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Merge defaults, config file and flags; validate every numeric value."""
    defaults = DEFAULTS[args.command]
    file_cfg: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except ValueError as exc:
            raise UsageError("config", f"not valid JSON: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise UsageError("config", "top level must be an object")
        unknown = set(file_cfg) - set(defaults) - {"out", "format"}
        if unknown:
            raise UsageError(sorted(unknown)[0], "unknown key in config file")
    cfg = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        cfg[key] = flag if flag is not None else file_cfg.get(key, default)
    for key in ("out", "format"):
        flag = getattr(args, key, None)
        cfg[key] = flag if flag is not None else file_cfg.get(key)
    for key, val in cfg.items():
        if val is None or key in ("out", "format"):
            continue
        if key in INTS:
            if isinstance(val, float) and not val.is_integer():
                raise UsageError(key, f"expected an integer, got {val}")
            cfg[key] = val = int(val)
        check = CHECKS.get(key)
        if check is not None and isinstance(val, (int, float)) and not check(val):
            raise UsageError(key, f"value {val} out of range")
    _validate_combined(args.command, cfg)
    return cfg


def _validate_combined(command: str, cfg: dict[str, Any]) -> None:
    if command == "verify":
        if cfg["inequality"] in ("star-star-tilde", "corollary") and not cfg["T"] > 1:
            raise UsageError("T", "must exceed 1 for this inequality")
        if cfg["N1"] > cfg["N2"]:
            raise UsageError("N1", "must not exceed N2")
        if cfg["inequality"] == "star-star-tilde" and 1 / cfg["T"] + cfg["kappa"] / cfg["T"] ** 2 >= 1:
            raise UsageError("kappa", "window ratio 1/T + kappa/T^2 must be < 1")
    elif command == "sweep":
        for key, conv in (("thetas", _floats), ("Ts", _floats), ("n_terms", _ints)):
            try:
                cfg[key] = conv(cfg[key])
            except ValueError:
                raise UsageError(key, "expected a comma-separated list of numbers") from None
        if any(not 0 < t < 1 for t in cfg["thetas"]):
            raise UsageError("thetas", "every theta must lie in (0, 1)")
        if any(not T > 0 for T in cfg["Ts"]):
            raise UsageError("Ts", "every T must be positive")
        if cfg["inequality"] == "star-star-tilde" and any(not T > 1 for T in cfg["Ts"]):
            raise UsageError("Ts", "every T must exceed 1 for this inequality")
        if any(n < 1 for n in cfg["n_terms"]):
            raise UsageError("n_terms", "must be positive")
    elif command == "selberg":
        try:
            cfg["h"] = _floats(cfg["h"])
        except ValueError:
            raise UsageError("h", "expected a comma-separated list of numbers") from None
        if any(not 0 < h < cfg["N"] for h in cfg["h"]):
            raise UsageError("h", "need 0 < h < N")
        if cfg["limit"] < 2 * cfg["N"] + math.ceil(max(cfg["h"], default=0)):
            raise UsageError("limit", "must cover 2N + h")


def workers() -> int:
    raw = os.environ.get("GALLAGHER_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError("GALLAGHER_THREADS", f"not an integer: {raw!r}") from None
    return n if n > 0 else (os.cpu_count() or 1)


def _reports_payload(command, cfg, reports: list[VerificationReport]) -> dict[str, Any]:
    params = {k: v for k, v in cfg.items() if k not in ("out", "format")}
    return {
        "command": command,
        "params": params,
        "all_pass": all(r.passed for r in reports),
        "n_reports": len(reports),
        "reports": [r.to_dict() for r in reports],
    }


def cmd_verify(cfg) -> tuple[list[VerificationReport], str | None]:
    ineq = cfg["inequality"]
    nw = workers()
    if ineq in ("star", "star-tilde"):
        reps = lemma_suite(ineq, [cfg["theta"]], cfg["trials"], cfg["seed"], cfg["max_terms"],
                           cfg["max_frequency"], T=cfg["T"], workers=nw)
    elif ineq == "star-star":
        reps = [check_gallagher_series(random_dirichlet(instance_rng(cfg["seed"], "series", i),
                                                        cfg["n_max"]),
                                       cfg["T"], seed=cfg["seed"], params={"trial": i})
                for i in range(cfg["trials"])]
    elif ineq == "star-star-tilde":
        reps = theorem_suite([cfg["T"]], cfg["n_max"], cfg["trials"], cfg["seed"], cfg["kappa"],
                             cfg["cap"], workers=nw)
    else:
        N1, N2 = cfg["N1"], cfg["N2"]
        w = constant(1.0, N1, N2, name="one")
        b = moebius(N2) if cfg["b"] == "mobius" else constant(1.0, 1, N2, name="one")
        reps = [check_corollary(w, b, N1, N2, cfg["T"], cfg["epsilon"], cfg["cap"], seed=cfg["seed"])]
    return reps, "theta" if ineq in ("star", "star-tilde") else "T"


def cmd_selberg(cfg):
    k = cfg["k"]
    degree = cfg["degree"] if cfg["degree"] is not None else k - 1
    seq = balance(sieve_dk(k, cfg["limit"]), degree)
    reps = [check_cl_selberg(seq, SelbergWindow(cfg["N"], h), cfg["cap"], seed=cfg["seed"])
            for h in cfg["h"]]
    return reps


def selberg_csv(reports: list[VerificationReport]) -> str:
    lines = ["N,h,modified,selberg,h3_sup2,ratio,pass"]
    for r in reports:
        terms = dict(r.rhs_terms)
        lines.append(",".join([str(r.params["N"]), format_float(r.params["h"]),
                               format_float(r.lhs), format_float(terms["selberg"]),
                               format_float(terms["h3_sup2"]), format_float(r.ratio),
                               str(r.passed).lower()]))
    return "\n".join(lines) + "\n"


def execute(command: str, cfg: dict[str, Any]) -> tuple[str, list[VerificationReport]]:
    """Run a resolved configuration; returns (output text, reports)."""
    fmt = cfg.get("format")
    if command == "sieve":
        seq = sieve_dk(cfg["k"], cfg["limit"]) if cfg["function"] == "dk" else moebius(cfg["limit"])
        if fmt == "json":
            return dumps_json({"name": seq.name, "n_min": seq.n_min, "values": seq.values}), []
        return seq.to_csv(), []
    if command == "sweep":
        sc = SweepConfig(cfg["thetas"], cfg["Ts"], cfg["n_terms"], cfg["seeds"], cfg["seed"],
                         cfg["max_frequency"], cfg["kappa"])
        rows = estimate_constant(cfg["inequality"], sc)
        if fmt == "json":
            return dumps_json(rows), []
        return table_to_csv(rows), []

    if command == "verify":
        reports, param = cmd_verify(cfg)
    elif command == "selberg":
        reports, param = cmd_selberg(cfg), "h"
    else:
        reports = plancherel_suite(cfg["trials"], cfg["seed"], cfg["max_terms"],
                                   cfg["max_frequency"], workers=workers())
        param = "theta"
    if fmt == "csv":
        if command == "selberg":
            return selberg_csv(reports), reports
        return (emit_plot_data(reports, param) if reports else ""), reports
    return dumps_json(_reports_payload(command, cfg, reports)), reports


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on unknown flags
    try:
        cfg = resolve(args)
        text, reports = execute(args.command, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if cfg.get("out"):
            with open(cfg["out"], "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    failures = [r for r in reports if not r.passed]
    if failures:
        sys.stderr.write(dumps_json({"failed": len(failures), "total": len(reports),
                                     "first_failure": failures[0].to_dict()}))
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
