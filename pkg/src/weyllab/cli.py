"""Command-line front end: every experiment with deterministic seeds,
JSON/CSV outputs, and the full bound-ledger suite.

Exit codes: 0 success, 2 invalid configuration, 3 bound violation inside
`suite`.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from math import log, sqrt
from pathlib import Path

import numpy as np

from . import counterexamples as cx
from . import incidence as inc
from . import kernel as ker
from . import levelsets as lv
from . import weights as wt
from .expsum import (
    CoefficientVector,
    TorusGrid,
    eval_direct,
    eval_grid,
    eval_rows,
    load_coefficients_csv,
    preset_coefficients,
)
from .rationals import dirichlet_approx, ramanujan_sum
from .util import dyadic_range

SCHEMA_VERSION = 1
RNG_NAME = "PCG64"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    n_max: int | None
    seeds: tuple[int, ...]
    preset: str
    output: str | None
    fmt: str


def _parse_seeds(raw: str) -> tuple[int, ...]:
    raw = raw.strip()
    if ".." in raw:
        lo, hi = raw.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(s) for s in raw.split(",") if s)


def _parse_point(raw: str) -> tuple[float, float]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise ConfigError(f"point must be 'x,t', got {raw!r}")
    return float(Fraction(parts[0])), float(Fraction(parts[1]))


def _coeffs_from_spec(spec: str, n_max: int, seed: int) -> CoefficientVector:
    if spec.startswith("file:"):
        return load_coefficients_csv(spec[5:])
    try:
        return preset_coefficients(spec, n_max, seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=repr) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(rows: list[dict], fieldnames: list[str], out: str | None) -> None:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fieldnames)
    w.writeheader()
    for row in rows:
        w.writerow(row)
    if out:
        Path(out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _result(command: str, params: dict, metrics: dict, t0: float, **extra) -> dict:
    payload = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "metrics": metrics,
        "rng": RNG_NAME,
        "wall_time": time.time() - t0,
    }
    payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# Individual commands.


def cmd_eval(args) -> int:
    t0 = time.time()
    coeffs = _coeffs_from_spec(args.coeffs, args.N, args.seed)
    pts = [_parse_point(p) for p in args.point] or [(0.0, 0.0)]
    vals = eval_direct(coeffs, pts)
    metrics = {
        "points": [list(p) for p in pts],
        "values": [[float(v.real), float(v.imag)] for v in vals],
        "abs": [float(abs(v)) for v in vals],
    }
    if args.dump_field:
        grid = TorusGrid(args.N)
        if grid.n_t * grid.n_x > 8_000_000:
            raise ConfigError("grid too large to dump; reduce N")
        from .expsum import dump_field_csv

        dump_field_csv(eval_grid(coeffs, grid), args.dump_field)
    _emit(_result("eval", {"N": args.N, "coeffs": args.coeffs, "seed": args.seed},
                  metrics, t0), args.output)
    return 0


def cmd_rationals(args) -> int:
    t0 = time.time()
    if args.sub == "ramanujan":
        val = ramanujan_sum(args.q, args.n)
        _emit(_result("rationals.ramanujan", {"q": args.q, "n": args.n},
                      {"value": val}, t0), args.output)
    else:
        fr = dirichlet_approx(Fraction(args.t), args.N)
        _emit(_result("rationals.approx", {"t": args.t, "N": args.N},
                      {"num": fr.num, "den": fr.den,
                       "error": float(abs(Fraction(args.t) % 1 - fr.as_fraction()))},
                      t0), args.output)
    return 0


def _levelset_rows(N: int, coeffs, lams, rescaled: bool) -> list[dict]:
    grid = TorusGrid(N)
    stats = lv.strip_attainment(coeffs, grid, lams)
    rows = []
    for lam in lams:
        cnt = stats.counts[float(lam)]
        bound = 100.0 * N * N * lam ** -4.0 * log(N)
        row = {
            "lambda": lam,
            "count": cnt,
            "bound": bound,
            "ratio": cnt / bound if bound > 0 else 0.0,
        }
        if rescaled:
            row["R"] = N * N
            row["mu"] = lam
        rows.append(row)
    return rows


def cmd_levelsets(args) -> int:
    t0 = time.time()
    N = args.N
    coeffs = _coeffs_from_spec(args.coeffs, N, args.seed)
    if args.lambda_all:
        lams = [float(v) for v in dyadic_range(N ** 0.25, N ** 0.5)]
    elif args.lam is not None:
        lams = [float(args.lam)]
    else:
        raise ConfigError("give --lambda or --lambda-all")
    rows = _levelset_rows(N, coeffs, lams, args.rescaled)
    fields = ["lambda", "count", "bound", "ratio"] + (["R", "mu"] if args.rescaled else [])
    if args.format == "json":
        _emit(_result("levelsets", {"N": N, "coeffs": args.coeffs, "seed": args.seed},
                      {"rows": rows}, t0), args.output)
    else:
        _emit_csv(rows, fields, args.output)
    return 0


def _load_family(path: str, n_max: int) -> inc.PointFamily:
    members = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "strip":
                continue
            members[int(row[0])] = float(row[1])
    return inc.PointFamily(n_max, members)


def cmd_incidence(args) -> int:
    t0 = time.time()
    N, M, Q = args.N, args.M, args.Q
    if args.family == "random":
        fam = inc.random_family(N, M, args.seed)
    elif args.family == "sharp":
        fam = inc.sharpness_configuration(args.q or Q, M, N)
    else:
        fam = _load_family(args.family, N)
    if args.records:
        count, recs = inc.count_incidences(fam, Q, args.tol_mult, collect=True)
    else:
        count = inc.count_incidences(fam, Q, args.tol_mult)
        recs = None
    bound = 100.0 * Q * M * log(N)
    metrics = {
        "count": count,
        "bound": bound,
        "ratio": inc.incidence_bound_ratio(fam, Q, args.tol_mult),
        "family_size": fam.size,
    }
    if recs is not None:
        metrics["records"] = [[r.i, r.j, r.frac.num, r.frac.den] for r in recs]
    _emit(_result("incidence", {"N": N, "M": M, "Q": Q, "family": args.family,
                                "seed": args.seed, "tol_mult": args.tol_mult},
                  metrics, t0), args.output)
    return 0


def cmd_kernel(args) -> int:
    t0 = time.time()
    N = args.N
    grid = TorusGrid(N)
    dec = ker.decompose(N, grid)
    if args.report == "sup":
        rep = ker.sup_norm_report(dec)
        pieces = {}
        for Q in dec.scales:
            entry = rep["pieces"][Q]
            pieces[str(Q)] = {"sup": entry["sup"], "bound_unit": entry["bound_unit"],
                              "ratio": entry["ratio"]}
            if args.dump_rowmax:
                rows = [{"t_index": int(k), "row_max": float(v)}
                        for k, v in enumerate(entry["row_max"])]
                _emit_csv(rows, ["t_index", "row_max"],
                          f"{args.dump_rowmax}.Q{Q}.csv")
        metrics = {
            "reconstruction_error": ker.reconstruction_error(dec),
            "pieces": pieces,
            "minor": rep["minor"],
        }
    else:
        M = args.M
        coeffs = preset_coefficients("random-phase", N, args.seed)
        sel = lv.adversarial_selection(coeffs, grid, M)
        rng = np.random.default_rng(args.seed)
        n_samples = len(sel.sample_points())
        h = rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples)
        hn = ker.l2_norm_on_selection(sel, h)
        vals = ker.bilinear_forms(dec, sel, h, dec.pieces() + ["full"])
        unit = sqrt(M) / N ** 2 * hn ** 2
        metrics = {
            "h_l2": hn,
            "bound_unit": unit,
            "pieces": {str(p): {"abs": abs(v), "ratio": abs(v) / unit}
                       for p, v in vals.items()},
        }
    _emit(_result("kernel", {"N": N, "report": args.report, "M": args.M,
                             "seed": args.seed}, metrics, t0), args.output)
    return 0


def _weight_from_spec(spec: str, coeffs, R: int) -> wt.Weight:
    if spec == "uniform":
        return wt.uniform_weight(R)
    if spec == "weyl":
        return cx.weyl_weight_scaled(R)
    if spec == "greedy":
        return wt.greedy_adversarial_weight(coeffs, R)
    if spec.startswith("file:"):
        return wt.load_weight_csv(R, spec[5:])
    raise ConfigError(f"unknown weight {spec!r}")


def cmd_weights(args) -> int:
    t0 = time.time()
    N = args.N
    if int(round(sqrt(N))) ** 2 != N:
        raise ConfigError("weights command requires N to be a perfect square")
    R = N * N
    coeffs = _coeffs_from_spec(args.coeffs, N, args.seed)
    w = _weight_from_spec(args.weight, coeffs, R)
    rep = wt.weighted_ratio_report(coeffs, w, args.mode)
    decomp = wt.decompose_weight_by_level(w, coeffs)
    table = wt.mu_regime_report(decomp, args.mode)
    metrics = {
        "numerator": rep["numerator"],
        "tube_sup": rep["tube_sup"],
        "ratio": rep["ratio"],
        "regime_table": table,
    }
    _emit(_result("weights.ratio", {"N": N, "R": R, "coeffs": args.coeffs,
                                    "weight": args.weight, "mode": args.mode,
                                    "seed": args.seed}, metrics, t0), args.output)
    return 0


def cmd_counterexample(args) -> int:
    t0 = time.time()
    if args.kind == "jarnik":
        if args.k is None:
            raise ConfigError("jarnik kind needs --k")
        table = cx.jarnik_curve(args.k)
        rep = cx.counterexample_report(table)
        fit = None
        if args.k >= 4:
            ks = sorted({max(1, args.k // 4), max(2, args.k // 2), args.k})
            if len(ks) >= 3:
                fit = cx.growth_exponent(tuple(ks))["slope"]
        metrics = {
            "N": rep["n_max"],
            "R": rep["r_scale"],
            "support_size": rep["support_size"],
            "ratio": rep["ratio"],
            "tube_sup": rep["tube_sup"],
            "exponent_fit": fit,
        }
        if args.dump_lattice:
            N = rep["n_max"]
            rows = []
            for m in range(N):
                vals = cx.curve_extension_sum(
                    table, np.stack([np.full(N, m * N), np.arange(N) * N], axis=1)
                )
                rows.extend(
                    {"x": m * N, "t": l * N, "abs": float(abs(v))}
                    for l, v in enumerate(vals)
                )
            _emit_csv(rows, ["x", "t", "abs"], args.dump_lattice)
    else:
        if args.N is None:
            raise ConfigError("weyl kind needs --N")
        R = args.N * args.N
        coeffs = preset_coefficients("ones", args.N)
        w = cx.weyl_weight_scaled(R)
        rep = wt.weighted_ratio_report(coeffs, w, args.mode)
        metrics = {
            "N": args.N,
            "R": R,
            "support_size": w.n_cells,
            "ratio": rep["ratio"],
            "tube_sup": rep["tube_sup"],
            "exponent_fit": None,
        }
    _emit(_result("counterexample", {"kind": args.kind, "k": args.k, "N": args.N,
                                     "mode": args.mode}, metrics, t0), args.output)
    return 0


# ---------------------------------------------------------------------------
# Suite: the full bound ledger.


def _ledger_row(name, N, measured, bound, unit, anchor):
    return {
        "name": name,
        "N": N,
        "measured": repr(float(measured)),
        "bound": repr(float(bound)),
        "constant": repr(float(measured / unit)) if unit else repr(0.0),
        "anchor": anchor,
    }


def run_suite(N: int, seeds: tuple[int, ...], out_dir: str | None) -> tuple[dict, list, bool]:
    rows = []
    violations = []

    def push(name, n, measured, bound, unit, anchor):
        rows.append(_ledger_row(name, n, measured, bound, unit, anchor))
        if measured > bound:
            violations.append(name)

    # 1. fast evaluation against direct summation
    rng = np.random.default_rng(seeds[0] if seeds else 0)
    for seed in seeds[:3] or (0,):
        coeffs = preset_coefficients("random-phase", N, seed)
        grid = TorusGrid(N)
        ks = rng.integers(0, grid.n_t, size=6)
        rws = eval_rows(coeffs, grid, ks)
        js = rng.integers(0, grid.n_x, size=6)
        pts = np.stack([js / grid.n_x, ks / grid.n_t], axis=1)
        err = float(np.max(np.abs(rws[np.arange(6), js] - eval_direct(coeffs, pts))))
        push(f"eval_oracle_seed{seed}", N, err, 1e-9 * sqrt(N) * coeffs.l2_norm,
             1e-9 * sqrt(N) * coeffs.l2_norm, "max|grid - direct| <= 1e-9 sqrt(N) l2(a)")

    # 2. mean square identity
    coeffs = preset_coefficients("random-gaussian", N, seeds[0] if seeds else 0)
    ms = eval_grid(coeffs, TorusGrid(N)).mean_square()
    push("parseval", N, abs(ms - coeffs.l2_norm ** 2), 1e-6 * coeffs.l2_norm ** 2,
         1e-6 * coeffs.l2_norm ** 2, "mean|f|^2 = l2(a)^2 (rel 1e-6)")

    # 3. complete quadratic sums at odd primes
    worst = 0.0
    for q in (3, 5, 7, 11, 13):
        for a in range(1, q):
            val = ker.kernel_eval(q, [(0.0, a / q)])[0]
            worst = max(worst, abs(abs(val) - sqrt(q)))
    push("gauss_magnitude", N, worst, 1e-9, 1e-9, "| |sum e(n^2 a/q)| - sqrt(q) | <= 1e-9")

    # 4. exact rational arithmetic spot checks
    mismatch = 0
    for q in range(1, 60):
        for n in (-5, 0, 1, 7, 23):
            direct = complex(
                sum(np.exp(-2j * np.pi * a * n / q) for a in range(q) if np.gcd(a, q) == 1 or (a == 0 and q == 1))
            ).real
            if abs(ramanujan_sum(q, n) - direct) > 1e-9:
                mismatch += 1
    push("ramanujan_direct", N, mismatch, 0, 1, "c_q(n) equals the direct sum exactly")

    # 5. level-set census
    grid = TorusGrid(N)
    lams = [float(v) for v in dyadic_range(N ** 0.25, N ** 0.5)]
    stats = lv.strip_attainment(preset_coefficients("ones", N), grid, lams)
    sharp_ok = 0
    for lam in lams:
        cnt = stats.counts[lam]
        push(f"levelset_ones_lam{int(lam)}", N, cnt, 100.0 * N * N * lam ** -4 * log(N),
             N * N * lam ** -4 * log(N), "#strips(lam) <= C N^2 lam^-4 log N")
        if cnt >= N * N * lam ** -4 / (100.0 * log(N)):
            sharp_ok += 1
    push("levelset_sharpness", N, 1 if sharp_ok == 0 else 0, 0, 1,
         "some lam attains #strips >= N^2 lam^-4 / (C log N)")
    for seed in seeds[:2] or (0,):
        stats = lv.strip_attainment(preset_coefficients("random-phase", N, seed), grid, lams)
        for lam in lams:
            push(f"levelset_seed{seed}_lam{int(lam)}", N, stats.counts[lam],
                 100.0 * N * N * lam ** -4 * log(N), N * N * lam ** -4 * log(N),
                 "#strips(lam) <= C N^2 lam^-4 log N")

    # 6. incidence bounds
    for Q in dyadic_range(1, N):
        for seed in seeds[:2] or (0,):
            fam = inc.random_family(N, N, seed)
            cnt = inc.count_incidences(fam, Q)
            push(f"incidence_Q{Q}_seed{seed}", N, cnt, 100.0 * Q * N * log(N),
                 Q * N * log(N), "count <= C Q M log N")
    q_sharp = max(1, min(N // 16, 8))
    if 10 * q_sharp <= N:
        fam = inc.sharpness_configuration(q_sharp, N, N)
        cnt = inc.count_incidences(fam, q_sharp)
        push("incidence_sharp_lower", N, 1 if cnt < q_sharp * N / 100.0 else 0, 0, 1,
             "sharp family attains count >= Q M / 100")
    fam = inc.random_family(N, min(N, 32), seeds[0] if seeds else 0)
    agree = int(inc.count_incidences(fam, 4) == inc.count_incidences_bruteforce(fam, 4))
    push("incidence_oracle_agreement", N, 1 - agree, 0, 1,
         "fast counter equals the pair-loop oracle exactly")

    # 7. kernel decomposition
    Nk = min(N, 64)
    gridk = TorusGrid(Nk)
    dec = ker.decompose(Nk, gridk)
    push("kernel_reconstruction", Nk, ker.reconstruction_error(dec), 1e-10 * Nk,
         1e-10 * Nk, "K = sum K_Q + K' (<= 1e-10 N)")
    rep = ker.sup_norm_report(dec)
    for Q in dec.scales:
        push(f"kernel_sup_Q{Q}", Nk, rep["pieces"][Q]["sup"],
             10.0 * Nk / sqrt(Q), Nk / sqrt(Q), "sup|K_Q| <= 10 N / sqrt(Q)")
    push("kernel_sup_minor", Nk, rep["minor"]["sup"], 10.0 * sqrt(Nk) * log(Nk) ** 3,
         sqrt(Nk) * log(Nk) ** 3, "sup|K'| <= 10 sqrt(N) (log N)^3")
    rngk = np.random.default_rng(seeds[0] if seeds else 0)
    for M in (1, 4, 16, min(64, Nk)):
        sel = lv.adversarial_selection(preset_coefficients("random-phase", Nk, 1), gridk, M)
        n_samples = len(sel.sample_points())
        h = rngk.standard_normal(n_samples) + 1j * rngk.standard_normal(n_samples)
        hn = ker.l2_norm_on_selection(sel, h)
        unit = sqrt(M) / Nk ** 2 * hn ** 2
        vals = ker.bilinear_forms(dec, sel, h, dec.pieces())
        for piece, v in vals.items():
            push(f"kernel_bilinear_M{M}_{piece}", Nk, abs(v), 100.0 * log(Nk) * unit,
                 unit, "<K_piece * h 1, h 1> <= C log N sqrt(M) N^-2 l2(h)^2")

    # 8. weighted mass ratios
    R = N * N
    coeffs_sets = [("ones", preset_coefficients("ones", N))]
    for seed in seeds[:2] or (0,):
        coeffs_sets.append((f"phase{seed}", preset_coefficients("random-phase", N, seed)))
    battery = [("uniform", wt.uniform_weight(R))]
    for seed in seeds[:2] or (0,):
        battery.append((f"oned{seed}", wt.random_one_dimensional_weight(R, seed)))
    if R ** (1 / 6) >= 2:
        battery.append(("weyl", cx.weyl_weight_scaled(R)))
    for cname, cvec in coeffs_sets:
        for wname, w in battery + [("greedy", wt.greedy_adversarial_weight(cvec, R))]:
            ratio = wt.weighted_ratio(cvec, w, "horizontal")
            push(f"weighted_ratio_{wname}_{cname}", N, ratio, 100.0 * log(R), log(R),
                 "sum|G|^2 w <= C sup_T w(T)^(1/2) R l2(a)^2")
    uni = wt.weighted_ratio(preset_coefficients("ones", N), wt.uniform_weight(R))
    push("weighted_ratio_uniform_closed_form", N, abs(uni - R ** -0.25),
         0.1 * R ** -0.25, R ** -0.25, "uniform weight ratio = R^(-1/4) (10%)")

    # 9. curve witness growth
    growth = cx.growth_exponent((8, 16, 32))
    push("counterexample_growth_slope", N, 1 if growth["slope"] < 0.04 else 0, 0, 1,
         "log ratio / log R slope >= 0.04")
    for pt in growth["points"]:
        push(f"counterexample_tube_k{pt['k']}", pt["n_max"],
             cx.lattice_tube_sup(pt["n_max"])[1], 4.0 * sqrt(pt["r_scale"]),
             sqrt(pt["r_scale"]), "w(T) <= C sqrt(R)")
        push(f"counterexample_support_k{pt['k']}", pt["n_max"],
             1 if pt["support_size"] < pt["n_max"] ** (2 / 3) / 10 else 0, 0, 1,
             "support >= N^(2/3) / 10")

    metrics = {
        "rows": len(rows),
        "violations": violations,
    }
    return metrics, rows, not violations


def cmd_suite(args) -> int:
    t0 = time.time()
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    metrics, rows, ok = run_suite(args.N, args.seeds, args.out)
    payload = _result("suite", {"N": args.N, "seeds": list(args.seeds)}, metrics, t0)
    if out_dir:
        _emit(payload, str(out_dir / "suite.json"))
        _emit_csv(rows, ["name", "N", "measured", "bound", "constant", "anchor"],
                  str(out_dir / "ledger.csv"))
    else:
        _emit(payload, None)
        _emit_csv(rows, ["name", "N", "measured", "bound", "constant", "anchor"], None)
    return 0 if ok else 3


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weyllab",
                                description="quadratic exponential sum laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_default=None):
        sp.add_argument("--output", default=None, help="write result to this path")
        sp.add_argument("--format", default="json", choices=["json", "csv"])
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("eval", help="evaluate f at points")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--preset", "--coeffs", dest="coeffs", default="ones")
    sp.add_argument("--point", action="append", default=[],
                    help="x,t (fractions allowed), repeatable")
    sp.add_argument("--dump-field", default=None)
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("rationals", help="exact rational helpers")
    rsub = sp.add_subparsers(dest="sub", required=True)
    rp = rsub.add_parser("ramanujan")
    rp.add_argument("--q", type=int, required=True)
    rp.add_argument("--n", type=int, required=True)
    common(rp)
    rp.set_defaults(func=cmd_rationals)
    ap = rsub.add_parser("approx")
    ap.add_argument("--t", required=True)
    ap.add_argument("--N", type=int, required=True)
    common(ap)
    ap.set_defaults(func=cmd_rationals)

    sp = sub.add_parser("levelsets", help="superlevel strip census")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--coeffs", default="ones")
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    sp.add_argument("--lambda-all", action="store_true")
    sp.add_argument("--rescaled", action="store_true",
                    help="also report in ball coordinates (R, mu)")
    common(sp)
    sp.set_defaults(func=cmd_levelsets, format="csv")
    sp.add_argument("--json", dest="format", action="store_const", const="json")

    sp = sub.add_parser("incidence", help="rational incidence counting")
    sp.add_argument("--family", default="random", help="random | sharp | <csv path>")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--Q", type=int, required=True)
    sp.add_argument("--q", type=int, default=None, help="modulus of the sharp family")
    sp.add_argument("--tol-mult", type=float, default=1.0)
    sp.add_argument("--records", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_incidence)

    sp = sub.add_parser("kernel", help="arc decomposition reports")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--report", choices=["sup", "bilinear"], default="sup")
    sp.add_argument("--M", type=int, default=16)
    sp.add_argument("--dump-rowmax", default=None)
    common(sp)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("weights", help="tube-weighted mass ratios")
    wsub = sp.add_subparsers(dest="sub", required=True)
    wp = wsub.add_parser("ratio")
    wp.add_argument("--N", type=int, required=True)
    wp.add_argument("--coeffs", default="ones")
    wp.add_argument("--weight", default="uniform",
                    help="uniform | weyl | greedy | file:<path>")
    wp.add_argument("--mode", choices=["horizontal", "all"], default="horizontal")
    common(wp)
    wp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("counterexample", help="sharp example constructions")
    sp.add_argument("--kind", choices=["weyl", "jarnik"], required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--mode", choices=["horizontal", "all"], default="horizontal")
    sp.add_argument("--dump-lattice", default=None)
    common(sp)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("suite", help="run the full bound ledger")
    sp.add_argument("--N", type=int, default=32)
    sp.add_argument("--seeds", type=_parse_seeds, default=(1, 2, 3))
    sp.add_argument("--out", default=None, help="directory for suite.json + ledger.csv")
    common(sp)
    sp.set_defaults(func=cmd_suite)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
