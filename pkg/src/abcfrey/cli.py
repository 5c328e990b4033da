"""Command line front end.

    abcfrey verify-tables
    abcfrey generate --family c2x4 --seed 32,49 --steps 2
    abcfrey repro [--deep]
    abcfrey theta [--family c2x6] [--digits 8]
    abcfrey cache info|clear
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import reference as ref
from .factor import FactorBudget, FactorCache
from .frey import c4_cross_check, c4_szpiro_positivity, minimal_invariants
from .maps import PreconditionError, TorsionFamily, table, verify_lemma1
from .torsion import certify_torsion, verify_cov
from .triples import SeedError, iterate, make_triple, quality, validate_seed

log = logging.getLogger("abcfrey")

CACHE_ENV = "ABCFREY_CACHE"
CSV_COLUMNS = ["family", "j", "a", "b", "c", "q", "sigma_m", "sigma",
               "good_triple", "good_curve", "torsion_certified"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    family: TorsionFamily | None = None
    seed: tuple[int, int] | None = None
    steps: int = 2
    budget: FactorBudget = FactorBudget()
    fmt: str = "text"
    cache_path: str | None = None
    force: bool = False
    torsion: bool = True

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")


def default_cache_path() -> str:
    env = os.environ.get(CACHE_ENV)
    if env:
        return env
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(Path.home(), ".cache")
    return os.path.join(base, "abcfrey", "factors.jsonl")


def _fmt4(x) -> str | None:
    return None if x is None else f"{float(x):.4f}"


# --------------------------------------------------------------------------
# verify-tables


def cmd_verify_tables(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    results = []

    def record(group, name, passed, asserted=True, detail=""):
        results.append({"group": group, "check": name, "passed": bool(passed),
                        "asserted": asserted, "detail": detail})

    for fam in TorsionFamily:
        rep = verify_lemma1(fam)
        for c in rep.checks:
            record(f"{fam} table item {c.item}", c.name, c.passed, c.asserted, c.detail)
        a, b = ref.SEEDS[fam]
        record(f"{fam} c4", f"c4 form at seed ({a}, {b})", c4_cross_check(fam, a, b))
        record(f"{fam} change of variables", f"Frey curve -> X_t at seed ({a}, {b})",
               verify_cov(fam, a, b))
        if fam is TorsionFamily.C2xC4:
            record(f"{fam} change of variables", "target is the tabulated X_t model",
                   verify_cov(fam, a, b, tabulated_model=True), False,
                   "tabulated C2xC4 row (g = 1) is not the curve reached")
        cert = c4_szpiro_positivity(fam)
        record(f"{fam} szpiro", f"c4(1,t)^3 - D(1,t)^6 > 0 for t > {float(table(fam).theta_tabulated):g}",
               cert.positive)

    ok = all(r["passed"] for r in results if r["asserted"])
    if cfg.fmt == "json":
        json.dump({"ok": ok, "checks": results}, out, indent=2)
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.DictWriter(out, ["group", "check", "passed", "asserted", "detail"])
        w.writeheader()
        w.writerows(results)
    else:
        for r in results:
            tag = "PASS" if r["passed"] else ("FAIL" if r["asserted"] else "note")
            out.write(f"[{tag}] {r['group']}: {r['check']}\n")
        out.write(f"{'all asserted checks passed' if ok else 'FAILURES'}\n")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# generate


def analyze_steps(cfg: RunConfig, cache, emit=None) -> tuple[dict, list[dict]]:
    fam = cfg.family
    a0, b0 = cfg.seed
    P0 = make_triple(a0, b0, cfg.budget, cache)
    seed = validate_seed(fam, P0)
    rows = []
    prev = P0

    def on_step(rep):
        nonlocal prev
        row = {"step": rep.to_json()}
        t = rep.triple
        inv = minimal_invariants(t.a, t.b, cfg.budget, cache, strict=False, c=t.c)
        row["curve"] = inv.to_json()
        row["_inv"] = inv
        if cfg.torsion:
            try:
                row["torsion"] = certify_torsion(fam, prev.a.value, prev.b.value).to_json()
            except PreconditionError as exc:
                row["torsion"] = {"certified": False, "notes": [str(exc)]}
        prev = t
        rows.append(row)
        if emit:
            emit(row)

    iterate(fam, P0, cfg.steps, cfg.budget, cache, force=cfg.force, on_step=on_step)
    seed_json = {"triple": P0.to_json(), "quality": _fmt4(quality(P0)), **seed.to_json()}
    return seed_json, rows


def _row_ok(row) -> bool:
    st, cv = row["step"], row["curve"]
    checks = [st["good_triple"], st["rad_lt_absD"], *st["congruences"].values(), cv["good"]]
    if "torsion" in row:
        checks.append(row["torsion"]["certified"])
    return all(c is True for c in checks)


def _csv_row(fam, row) -> dict:
    st, cv = row["step"], row["curve"]
    tr = st["triple"]
    return {
        "family": fam.slug, "j": st["j"],
        "a": tr["a"]["value"], "b": tr["b"]["value"], "c": tr["c"]["value"],
        "q": st["quality"], "sigma_m": cv["sigma_m"], "sigma": cv["sigma"],
        "good_triple": st["good_triple"], "good_curve": cv["good"],
        "torsion_certified": row.get("torsion", {}).get("certified"),
    }


def _text_row(fam, row) -> str:
    st, cv = row["step"], row["curve"]
    tr = st["triple"]

    def fz(d):
        parts = [p if e == 1 else f"{p}^{e}" for p, e in d["factors"]]
        if d["cofactor"] != "1":
            parts.append(f"[{d['cofactor']}]")
        return "*".join(parts) or "1"

    tors = row.get("torsion")
    lines = [
        f"{fam} j={st['j']}",
        f"  a = {fz(tr['a'])}",
        f"  b = {fz(tr['b'])}",
        f"  c = {fz(tr['c'])}",
        f"  q = {st['quality']}  good={st['good_triple']}  rad<|D|={st['rad_lt_absD']}"
        f"  b/a>theta={st['ratio_exceeds_theta']}",
        f"  congruences: " + ", ".join(f"{k}: {v}" for k, v in st["congruences"].items()),
        f"  sigma_m = {cv['sigma_m']}  sigma = {cv['sigma']}  good curve={cv['good']}"
        f"  N = rad(abc): {cv['conductor_equals_rad_abc']}",
    ]
    if tors is not None:
        lines.append(f"  torsion {tors.get('claimed', '?')} certified={tors['certified']}"
                     f" bound={tors.get('upper_bound')}")
    return "\n".join(lines)


def cmd_generate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cache = _open_cache(cfg)
    fam = cfg.family
    writer = None
    if cfg.fmt == "csv":
        writer = csv.DictWriter(out, CSV_COLUMNS)
        writer.writeheader()

    def emit(row):
        if cfg.fmt == "csv":
            writer.writerow(_csv_row(fam, row))
        elif cfg.fmt == "text":
            out.write(_text_row(fam, row) + "\n")
        out.flush()

    try:
        seed, rows = analyze_steps(cfg, cache, emit)
    except SeedError as exc:
        msg = {"error": "seed validation failed", "seed": exc.report.to_json()}
        if cfg.fmt == "json":
            json.dump(msg, out, indent=2)
            out.write("\n")
        else:
            print(f"seed validation failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.fmt == "json":
        doc = {
            "family": fam.label,
            "seed": seed,
            "steps": [{k: v for k, v in r.items() if not k.startswith("_")} for r in rows],
        }
        doc["ok"] = all(_row_ok(r) for r in rows)
        json.dump(doc, out, indent=2)
        out.write("\n")
    incomplete = any(r["curve"]["conductor"] is None or r["step"]["quality"] is None for r in rows)
    if incomplete:
        return EXIT_INCOMPLETE
    return EXIT_OK if all(_row_ok(r) for r in rows) else EXIT_FAIL


# --------------------------------------------------------------------------
# repro


def reproduce(deep: bool, budget: FactorBudget, cache=None, families=None):
    """Compare computed values with the published ones.

    Yields dicts with keys family, quantity, j, published, computed, delta, status
    where status is "ok", "MISMATCH" or "unavailable".
    """
    for fam in families or list(TorsionFamily):
        a0, b0 = ref.SEEDS[fam]
        P0 = make_triple(a0, b0, budget, cache)
        depth = ref.DEEP_DEPTH[fam] if deep else ref.DEFAULT_DEPTH
        yield _cmp(fam, "seed q", 0, ref.SEED_QUALITY[(a0, b0)], quality(P0))
        for rep in iterate(fam, P0, depth, budget, cache):
            j = rep.j
            if j == 1:
                t = rep.triple
                for name, want, got in (("a1", ref.FACTORED_A1[fam], t.a),
                                        ("b1", ref.FACTORED_B1[fam], t.b)):
                    same = got.complete and got.as_dict() == want
                    yield {"family": fam.label, "quantity": name, "j": 1,
                           "published": _fmt_fz(want), "computed": str(got), "delta": None,
                           "status": "ok" if same else "MISMATCH"}
            if j in ref.QUALITY[fam]:
                yield _cmp(fam, "q", j, ref.QUALITY[fam][j], rep.quality)
            if j in ref.SIGMA_M[fam]:
                inv = minimal_invariants(rep.triple.a, rep.triple.b, budget, cache, c=rep.triple.c)
                yield _cmp(fam, "sigma_m", j, ref.SIGMA_M[fam][j], inv.sigma_m)


def _fmt_fz(d: dict) -> str:
    return "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in sorted(d.items()))


def _cmp(fam, name, j, published, computed) -> dict:
    row = {"family": fam.label, "quantity": name, "j": j, "published": f"{published}"}
    if computed is None:
        row.update(computed=None, delta=None, status="unavailable")
        return row
    delta = float(computed) - published
    row.update(computed=f"{float(computed):.4f}", delta=f"{delta:+.5f}",
               status="ok" if abs(delta) <= ref.TOLERANCE else "MISMATCH")
    return row


def cmd_repro(cfg: RunConfig, deep: bool = False, out=None) -> int:
    out = out or sys.stdout
    cache = _open_cache(cfg)
    rows = []
    writer = None
    if cfg.fmt == "csv":
        writer = csv.DictWriter(out, ["family", "quantity", "j", "published", "computed", "delta", "status"])
        writer.writeheader()
    fams = [cfg.family] if cfg.family else None
    for row in reproduce(deep, cfg.budget, cache, fams):
        rows.append(row)
        if cfg.fmt == "csv":
            writer.writerow(row)
        elif cfg.fmt == "text":
            flag = "" if row["status"] == "ok" else f"   <-- {row['status']}"
            out.write(f"{row['family']:6} {row['quantity']:8} j={row['j']}  published {row['published']:>24}"
                      f"  computed {str(row['computed']):>28}  delta {row['delta']}{flag}\n")
        out.flush()
    ok = all(r["status"] != "MISMATCH" for r in rows)
    if cfg.fmt == "json":
        json.dump({"ok": ok, "rows": rows}, out, indent=2)
        out.write("\n")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# theta


def cmd_theta(cfg: RunConfig, digits: int = 8, out=None) -> int:
    out = out or sys.stdout
    if digits < 1:
        print("error: --digits must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    from fractions import Fraction

    from .roots import greatest_real_root

    rows = []
    for fam in [cfg.family] if cfg.family else list(TorsionFamily):
        tb = table(fam)
        iv = greatest_real_root(tb.f_num, Fraction(1, 10 ** (digits + 2)))
        tabulated = tb.theta_tabulated
        note = ""
        if abs(float(iv) - float(tabulated)) > 1e-5:
            note = "tabulated constant differs from the computed greatest root"
        rows.append({
            "family": fam.label,
            "f_numerator": str(tb.f_num),
            "tabulated": f"{float(tabulated):g}",
            "root": iv.decimal(digits),
            "interval": [str(iv.lo), str(iv.hi)],
            "note": note,
        })
    if cfg.fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.DictWriter(out, ["family", "f_numerator", "tabulated", "root", "note"],
                           extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
    else:
        for r in rows:
            out.write(f"{r['family']}: greatest root of {r['f_numerator']}\n"
                      f"  computed {r['root']}  tabulated {r['tabulated']}"
                      f"{'  (' + r['note'] + ')' if r['note'] else ''}\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# cache


def _open_cache(cfg: RunConfig):
    if cfg.cache_path is None:
        return None
    return FactorCache(cfg.cache_path)


def cmd_cache(cfg: RunConfig, action: str, out=None) -> int:
    out = out or sys.stdout
    path = cfg.cache_path or default_cache_path()
    cache = FactorCache(path)
    if action == "clear":
        cache.clear()
        out.write(f"cleared {path}\n")
    else:
        size = os.path.getsize(path) if os.path.exists(path) else 0
        out.write(f"{path}: {len(cache)} entries, {size} bytes\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _seed(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("seed must look like A,B") from None
    return a, b


def _family(text: str) -> TorsionFamily:
    try:
        return TorsionFamily.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["text", "json", "csv"], default="text")
    common.add_argument("-v", "--verbose", action="store_true")
    g = common.add_argument_group("factoring")
    g.add_argument("--cache", help=f"factor cache file (default ${CACHE_ENV} or ~/.cache/abcfrey)")
    g.add_argument("--no-cache", action="store_true")
    g.add_argument("--deep", action="store_true", help="enable ECM (needed for j = 3)")
    g.add_argument("--trial-bound", type=_nonneg)
    g.add_argument("--rho-iterations", type=_nonneg)
    g.add_argument("--ecm-curves", type=_nonneg)
    g.add_argument("--time-limit", type=float, help="seconds per factor() call")
    g.add_argument("--rng-seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="abcfrey", description="Good ABC triples and good Frey curves.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-tables", parents=[common], help="check every table identity")
    gen = sub.add_parser("generate", parents=[common], help="iterate a family's map from a seed")
    gen.add_argument("--family", type=_family, required=True, help="c2x2, c2x4, c2x6 or c2x8")
    gen.add_argument("--seed", type=_seed, required=True, help="seed triple as A,B")
    gen.add_argument("--steps", type=_nonneg, default=2, help="number of map applications")
    gen.add_argument("--force", action="store_true", help="continue past a failing seed")
    gen.add_argument("--no-torsion", action="store_true", help="skip torsion certification")
    rep = sub.add_parser("repro", parents=[common], help="reproduce the published tables")
    rep.add_argument("--family", type=_family)
    th = sub.add_parser("theta", parents=[common], help="greatest real root of f")
    th.add_argument("--family", type=_family)
    th.add_argument("--digits", type=int, default=8)
    ca = sub.add_parser("cache", parents=[common], help="inspect or clear the factor cache")
    ca.add_argument("action", choices=["info", "clear"])
    return p


def config_from_args(args) -> RunConfig:
    kw = {}
    for name in ("trial_bound", "rho_iterations", "ecm_curves"):
        if getattr(args, name) is not None:
            kw[name] = getattr(args, name)
    if args.time_limit is not None:
        kw["wall_clock_limit"] = args.time_limit
    kw["seed"] = args.rng_seed
    budget = FactorBudget.deep(**kw) if args.deep else FactorBudget(**kw)
    cache_path = None if args.no_cache else (args.cache or default_cache_path())
    return RunConfig(
        command=args.command,
        family=getattr(args, "family", None),
        seed=getattr(args, "seed", None),
        steps=getattr(args, "steps", 2),
        budget=budget,
        fmt=args.fmt,
        cache_path=cache_path,
        force=getattr(args, "force", False),
        torsion=not getattr(args, "no_torsion", False),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    cfg = config_from_args(args)
    t0 = time.perf_counter()
    try:
        if cfg.command == "verify-tables":
            code = cmd_verify_tables(cfg)
        elif cfg.command == "generate":
            code = cmd_generate(cfg)
        elif cfg.command == "repro":
            code = cmd_repro(cfg, deep=args.deep)
        elif cfg.command == "theta":
            code = cmd_theta(cfg, args.digits)
        else:
            code = cmd_cache(cfg, args.action)
    except BrokenPipeError:
        # output piped into e.g. head; silence the flush at interpreter exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    log.info("%s finished in %.2fs with exit code %d", cfg.command, time.perf_counter() - t0, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
