"""Command-line front end.

    genli zeros info|ingest TABLE
    genli li compute|verify-identity|scan-a --zeros TABLE ...
    genli bl check|witness FILE | bl gen --kind on_line ...
    genli littlewood verify CASES.json

Every command accepts ``--config run.json``; keys are the long option names
with dashes replaced by underscores, and explicit flags override them.  The
exit status is 0 exactly when every check of the run passed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import li, littlewood, multiset, report
from .errors import GenliError, PoleError
from .precision import PrecisionContext
from .zeros import ingest, spot_check

DEFAULTS = {
    "precision_bits": None,
    "a": 0.0,
    "a_grid": "0.25,0.75",
    "n_max": 20,
    "sigma": 0.5,
    "t_cutoff": None,
    "output_dir": None,
    "formats": "csv,json",
    "spot_checks": 5,
    "kind": "on_line",
    "seed": 0,
    "count": 50,
    "offset": 0.3,
    "epsilon": "0.01,0.1,0.5",
    "c": 1.0,
    "out": None,
    "zeros": None,
}


class UsageError(Exception):
    pass


def _opt(p: argparse.ArgumentParser, *names, **kw):
    kw.setdefault("default", None)
    p.add_argument(*names, **kw)


def _common(p):
    _opt(p, "--config", help="JSON file with default option values")
    _opt(p, "--precision-bits", type=int)
    _opt(p, "--output-dir", help="directory for report files")
    _opt(p, "--formats", help="comma-separated subset of csv,json,svg")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genli", description="Generalized Li coefficients and related checks")
    sub = ap.add_subparsers(dest="group", required=True)

    z = sub.add_parser("zeros", help="inspect or validate a zero table")
    zs = z.add_subparsers(dest="command", required=True)
    for name in ("info", "ingest"):
        p = zs.add_parser(name)
        p.add_argument("table")
        _common(p)
        _opt(p, "--spot-checks", type=int, help="ingest: number of sampled entries checked against zeta")

    l = sub.add_parser("li", help="generalized Li sums")
    ls = l.add_subparsers(dest="command", required=True)
    for name in ("compute", "verify-identity", "scan-a"):
        p = ls.add_parser(name)
        _common(p)
        _opt(p, "--zeros", help="zero table path")
        _opt(p, "--n-max", type=int)
        _opt(p, "--t-cutoff", type=float)
        _opt(p, "--sigma", type=float)
        if name == "scan-a":
            _opt(p, "--a-grid", help="comma-separated values of a")
        else:
            _opt(p, "--a", help="real parameter a != 1/2")

    b = sub.add_parser("bl", help="Bombieri-Lagarias sums on multisets")
    bs = b.add_subparsers(dest="command", required=True)
    for name in ("check", "witness"):
        p = bs.add_parser(name)
        p.add_argument("multiset")
        _common(p)
        _opt(p, "--n-max", type=int)
        _opt(p, "--epsilon", help="comma-separated epsilon grid for the growth bound")
        _opt(p, "--c", type=float)
    p = bs.add_parser("gen")
    _common(p)
    _opt(p, "--kind", choices=multiset.KINDS)
    _opt(p, "--seed", type=int)
    _opt(p, "--count", type=int)
    _opt(p, "--sigma", type=float)
    _opt(p, "--a")
    _opt(p, "--offset", type=float)
    _opt(p, "--out", help="write the multiset JSON here (default stdout)")

    w = sub.add_parser("littlewood", help="contour identity checks")
    ws = w.add_subparsers(dest="command", required=True)
    p = ws.add_parser("verify")
    p.add_argument("cases")
    _common(p)
    _opt(p, "--zeros", help="zero table for xi cases that reference a catalog")
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise UsageError(f"config file {path} does not exist")
        try:
            cfg.update(json.loads(path.read_text()))
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {path}: {exc}") from None
    for k, v in vars(args).items():
        if v is not None:
            cfg[k] = v
    cfg["formats"] = _split(cfg["formats"], str)
    bad = set(cfg["formats"]) - {"csv", "json", "svg"}
    if bad:
        raise UsageError(f"unknown output formats {sorted(bad)}")
    if int(cfg["n_max"]) < 1:
        raise UsageError("n_max must be >= 1")
    return cfg


def _split(v, conv):
    if isinstance(v, (list, tuple)):
        return [conv(x) for x in v]
    return [conv(x.strip()) for x in str(v).split(",") if x.strip()]


def _emit(cfg, stem, payload, csv_body=None):
    body = report.json_text(payload)
    report.write_outputs(cfg["output_dir"], stem, cfg["formats"], csv_body=csv_body, json_body=body)
    sys.stdout.write(csv_body if csv_body is not None and cfg["output_dir"] is None else body)


def _catalog(cfg):
    if not cfg.get("zeros"):
        raise UsageError("--zeros TABLE is required")
    if not Path(cfg["zeros"]).exists():
        raise UsageError(f"zero table {cfg['zeros']} does not exist")
    return ingest(cfg["zeros"])


def _not_half(a: str):
    if float(a) == 0.5:
        raise UsageError("a = 1/2 is degenerate (every k(n, 1/2) vanishes); choose a != 1/2")


# ----------------------------------------------------------------- commands

def cmd_zeros(cfg) -> bool:
    cat = ingest(cfg["table"])
    payload = {
        "command": f"zeros {cfg['command']}",
        "table": str(cfg["table"]),
        "count": len(cat),
        "zero_count": cat.zero_count,
        "t_max": cat.ordinates[-1],
        "ordinate_uncertainty": cat.ordinate_uncertainty,
    }
    ok = True
    if cfg["command"] == "ingest":
        checks = spot_check(cat, PrecisionContext(128, 1e-20), samples=int(cfg["spot_checks"]))
        payload["spot_checks"] = [
            {"index": c.index, "ordinate": c.ordinate, "abs_xi": c.xi_abs, "abs_zeta": c.zeta_abs, "ok": c.ok}
            for c in checks
        ]
        ok = all(c.ok for c in checks)
    payload["pass"] = ok
    _emit(cfg, "zeros", payload)
    return ok


def _li_rows(cat, a, cfg, ctx, with_taylor, taylor=None):
    if with_taylor:
        rep = li.verify_identity(cat, a, int(cfg["n_max"]), ctx, cfg["t_cutoff"], taylor)
        return [(r.n, a, r.k_zero_sum, r.tail_bound, r.k_taylor, r.residual, r.budget, r.passed) for r in rep.rows]
    ks = li.k_sums_from_zeros(cat, a, int(cfg["n_max"]), ctx, cfg["t_cutoff"], sigma=cfg["sigma"])
    return [(k.n, a, k.value, k.tail_bound, None, None, k.error_bound, k.value + k.tail_bound + k.error_bound >= 0) for k in ks]


def cmd_li(cfg) -> bool:
    cat = _catalog(cfg)
    ctx = PrecisionContext(int(cfg["precision_bits"]))
    if float(cfg["sigma"]) != 0.5:
        raise UsageError("catalog zeros lie on Re z = 1/2; sigma must be 0.5")
    command = cfg["command"]
    if command == "scan-a":
        grid = _split(cfg["a_grid"], str)
        for a in grid:
            _not_half(a)
        columns = report.LI_COLUMNS + ("verdict",)
        rows = []
        verdicts = {}
        for a in grid:
            ts = li.taylor_coeffs_cauchy(a, int(cfg["n_max"]), ctx=ctx)
            part = _li_rows(cat, a, cfg, ctx, True, ts)
            entry = li.sign_scan(cat, [a], int(cfg["n_max"]), ctx, cfg["t_cutoff"], {a: ts})[0]
            verdicts[a] = {"verdict": entry.verdict, "min_k_margin": entry.min_k_margin,
                           "min_signed_lambda_margin": entry.min_signed_lambda_margin}
            rows += [r + (entry.verdict,) for r in part]
        ok = all(r[7] for r in rows) and all(v["verdict"] == "CONSISTENT" for v in verdicts.values())
    else:
        a = str(cfg["a"])
        _not_half(a)
        columns = report.LI_COLUMNS
        rows = _li_rows(cat, a, cfg, ctx, command == "verify-identity")
        verdicts = None
        ok = all(r[7] for r in rows)
    body = report.csv_text(columns, rows)
    payload = {
        "command": f"li {command}",
        "zeros": str(cfg["zeros"]),
        "precision_bits": ctx.precision_bits,
        "t_cutoff": cfg["t_cutoff"] if cfg["t_cutoff"] is not None else cat.t_max,
        "n_max": int(cfg["n_max"]),
        "rows": [dict(zip(columns, [report.fmt(v) for v in r])) for r in rows],
        "pass": ok,
    }
    if verdicts is not None:
        payload["verdicts"] = verdicts
    _emit(cfg, f"li_{command.replace('-', '_')}", payload, body)
    return ok


def cmd_bl(cfg) -> bool:
    ctx = PrecisionContext(int(cfg["precision_bits"]))
    if cfg["command"] == "gen":
        ms = multiset.gen_multiset(cfg["kind"], int(cfg["seed"]), int(cfg["count"]), cfg["sigma"], cfg["a"], ctx,
                                   offset=float(cfg["offset"]))
        text = json.dumps(multiset.to_json(ms), indent=1) + "\n"
        if cfg["out"]:
            Path(cfg["out"]).write_text(text)
        else:
            sys.stdout.write(text)
        return True
    try:
        ms = multiset.load(cfg["multiset"], ctx)
    except PoleError as exc:
        payload = {"command": f"bl {cfg['command']}", "condition_i": False, "error": str(exc), "pass": False}
        _emit(cfg, "bl", payload)
        return False
    n_max = int(cfg["n_max"])
    witness = multiset.find_negativity_witness(ms, n_max)
    payload = {
        "command": f"bl {cfg['command']}",
        "condition_i": True,
        "conjugate_symmetric": ms.flags.conjugate_symmetric,
        "functional_symmetric": ms.flags.functional_symmetric,
        "n_max": n_max,
        "witness": witness,
    }
    ok = witness is None
    if cfg["command"] == "check":
        c2 = multiset.condition_ii_sum(ms)
        payload["condition_ii"] = {"sum": c2.bl, "li_companion": c2.li_companion}
        payload["sums"] = [multiset.bl_real_sum(ms, n) for n in range(1, n_max + 1)]
        growth = []
        for eps in _split(cfg["epsilon"], float):
            v = multiset.check_growth_bound(ms, multiset.GrowthBound(eps, float(cfg["c"])), n_max)
            growth.append({"epsilon": eps, "c": v.c, "first_violation": v.first_violation, "pass": v.passed})
            ok = ok and v.passed
        payload["growth"] = growth
    payload["pass"] = ok
    _emit(cfg, "bl", payload)
    return ok


def cmd_littlewood(cfg) -> bool:
    cat = ingest(cfg["zeros"]) if cfg.get("zeros") else None
    cases = littlewood.load_cases(cfg["cases"], cat)
    results = []
    ok = True
    for case in cases:
        r = case.run()
        ok = ok and r.ok
        results.append({
            "name": r.name,
            "lhs": r.lhs,
            "rhs": r.rhs,
            "residual": r.residual,
            "tolerance": r.tolerance,
            "pass": r.passed,
            "expected": "pass" if r.expect_pass else "fail",
            "as_expected": r.ok,
        })
    _emit(cfg, "littlewood", {"command": "littlewood verify", "cases": results, "pass": ok})
    return ok


COMMANDS = {"zeros": cmd_zeros, "li": cmd_li, "bl": cmd_bl, "littlewood": cmd_littlewood}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve(args)
        if cfg["precision_bits"] is None:
            cfg["precision_bits"] = 128 if args.group == "bl" else 256
        return 0 if COMMANDS[args.group](cfg) else 1
    except UsageError as exc:
        print(f"genli: usage error: {exc}", file=sys.stderr)
        return 2
    except (GenliError, OSError) as exc:
        print(f"genli: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
