"""Command-line front end.

Subcommands: simulate, fit, path, cv, compare, refit.  Every command writes
``config.json`` (the resolved parameters) into its output directory; running
``pathlasso <command> --config <that file>`` repeats the run.  Exit codes:
0 success (possibly with convergence warnings), 2 I/O or parse failure,
3 invalid parameters or data.

Seeds: ``simulate`` uses ``--seed`` as the design seed (replicate ``i`` draws
from ``SeedSequence(seed, spawn_key=(i,))``); ``cv`` and ``refit`` use it for
fold assignment and resampling; ``compare`` gives replicate ``i`` the CV seed
``SeedSequence(seed, spawn_key=(4000003, i))``.  Results never depend on
``--threads``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import io
from .admm import (OMEGA_RULES, PathResult, SolverOptions, fit, fit_path, lambda_grid,
                   make_grid, prox_inputs)
from .baselines import bk_fit, tslasso_path
from .core import PenaltySpec, standardize
from .evaluation import (cross_validate, f1_score, jaccard, l2_difference, matched_curves,
                         mse_ab, roc_curve, select_pathways, _rates)
from .prox import prox_pair_arrays
from .refit import bootstrap_ci
from .simulate import default_design, gen_proposed

log = logging.getLogger("pathlasso")

COMPARE_STREAM = 4_000_003
METHODS = ("BK", "TSLasso", "PathLasso-omega0", "PathLasso-omega0.1lambda",
           "PathLasso-omegalambda")
_RULE_OF = {"PathLasso-omega0": "zero", "PathLasso-omega0.1lambda": "0.1lambda",
            "PathLasso-omegalambda": "lambda"}
# parameters that change how a run executes but not what it writes
_EXECUTION_ONLY = {"threads", "output_dir", "config", "func"}


class UsageError(Exception):
    """Raised for invalid parameter combinations (exit code 3)."""


# ---------------------------------------------------------------------------
# helpers

@contextmanager
def _mapper(threads: int):
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            yield ex.map
    else:
        yield map


def _opts(args) -> SolverOptions:
    return SolverOptions(max_iter=args.max_iter, tol_primal=args.tol_primal,
                         tol_change=args.tol_change, rho=args.rho, c_penalty=args.c_penalty)


def _grid(args) -> List[PenaltySpec]:
    lams = lambda_grid(args.n_lambda, args.lambda_min, args.lambda_max)
    if args.method == "tslasso":
        return [PenaltySpec(0.0, args.phi, float(w), w2=args.w2) for w in lams]
    return make_grid(lams, args.phi, args.omega_rule, args.omega, w2=args.w2)


def _load(args):
    if not args.input:
        raise UsageError("--input is required")
    data = io.read_dataset(args.input)
    return data, standardize(data)


def _write_config(out: Path, args) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _EXECUTION_ONLY}
    io.write_json(out / "config.json", cfg)


def _report_convergence(fits) -> None:
    bad = sum(not f.converged for f in fits)
    if bad:
        log.warning("%d of %d fits did not converge", bad, len(fits))


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> None:
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    design = default_design(n=args.n, k=args.k, rho_m=args.rho_m, seed=args.seed,
                            n_true=args.n_true, c_true=args.c_true, sigma2=args.sigma2,
                            binary_treatment=args.binary_treatment)
    out = io.ensure_dir(args.output_dir)
    pairs = np.argwhere(np.triu(design.sigma1, 1) != 0)
    for rep in range(args.reps):
        data, truth = gen_proposed(design, rep)
        truth["sigma1"] = {"rho_m": design.rho_m, "pairs": pairs}
        io.write_dataset(out / f"dataset_{rep:03d}.csv", data)
        io.write_json(out / f"truth_{rep:03d}.json", truth)
    _write_config(out, args)


# ---------------------------------------------------------------------------
# fit / path

def cmd_fit(args) -> None:
    data, sdata = _load(args)
    spec = PenaltySpec(args.lam, args.phi, args.omega, w2=args.w2)
    res = fit(sdata, spec, _opts(args))
    out = io.ensure_dir(args.output_dir)
    path = PathResult([spec], [res], method="PathLasso" if spec.lam > 0 else "TSLasso")
    io.write_path_csv(out / "fit.csv", path, data.column_names)
    io.write_json(out / "fit.json", io.path_summary(path, data.column_names))
    if args.dump_prox:
        lam, om, p1, p2, mu1, mu2 = prox_inputs(res.state, spec)
        a, b, cond = prox_pair_arrays(lam, om, p1, p2, mu1, mu2)
        shape = np.broadcast(lam, om, p1, p2, mu1, mu2).shape
        cols = [np.broadcast_to(v, shape) for v in (lam, om, p1, p2, mu1, mu2)]
        io.write_rows(out / "prox_debug.csv",
                      ["coordinate", "lambda", "omega", "phi1", "phi2", "mu1", "mu2",
                       "condition", "a", "b"],
                      ([j, *(float(c[j]) for c in cols), int(cond[j]), a[j], b[j]]
                       for j in range(shape[0])))
    _report_convergence([res])
    _write_config(out, args)


def cmd_path(args) -> None:
    data, sdata = _load(args)
    specs = _grid(args)
    if args.method == "tslasso":
        res = tslasso_path(sdata, [s.omega for s in specs], _opts(args), phi=args.phi,
                           w2=args.w2)
    else:
        res = fit_path(sdata, specs, _opts(args))
    out = io.ensure_dir(args.output_dir)
    io.write_path_csv(out / "path.csv", res, data.column_names)
    io.write_json(out / "path.json", io.path_summary(res, data.column_names))
    _report_convergence(res.fits)
    _write_config(out, args)


# ---------------------------------------------------------------------------
# cv

def cmd_cv(args) -> None:
    data, sdata = _load(args)
    specs = _grid(args)
    if args.folds > data.n:
        raise UsageError(f"--folds ({args.folds}) exceeds number of observations ({data.n})")
    opts = _opts(args)
    with _mapper(args.threads) as map_fn:
        report = cross_validate(sdata, specs, args.folds, args.seed, opts, map_fn=map_fn)
    # full-data fit reached along the same warm-started path
    path = fit_path(sdata, specs[: report.chosen + 1], opts)
    chosen = path.fits[-1]
    sel = select_pathways(chosen.coefs.ab).selected
    names = data.column_names
    out = io.ensure_dir(args.output_dir)
    io.write_json(out / "cv_report.json", io.cv_report_json(report))
    io.write_rows(out / "cv_losses.csv",
                  ["lambda", "phi", "omega", "mean_loss", "converged_folds", "chosen"],
                  ([s.lam, s.phi, s.omega, m, int(report.converged[:, i].sum()),
                    i == report.chosen]
                   for i, (s, m) in enumerate(zip(report.grid, report.mean_loss))))
    io.write_path_csv(out / "chosen_fit.csv", PathResult([chosen.spec], [chosen]), names)
    io.write_json(out / "selected.json", {
        "selected": [names[j] for j in sorted(sel)],
        "indices": sorted(sel),
        "cutoff": 1e-3,
        "lambda": chosen.spec.lam, "phi": chosen.spec.phi, "omega": chosen.spec.omega})
    _write_config(out, args)


# ---------------------------------------------------------------------------
# compare

def replicate_seed(seed: int, rep: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(COMPARE_STREAM, rep)).generate_state(1)[0])


def _bk_rows(results, truth, ab_true):
    p = np.array([r.p_value for r in results])
    ab = np.nan_to_num(np.array([r.ab_hat for r in results]))
    k = p.size
    rows = []
    thresholds = np.unique(p)
    sets = [frozenset(np.flatnonzero(p <= t).tolist()) for t in thresholds]
    fpr, tpr = _rates(sets, truth, k)
    for i, (t, s) in enumerate(zip(thresholds, sets)):
        est = np.where(np.isin(np.arange(k), list(s)), ab, 0.0)
        rows.append(dict(grid_index=i, lam=float("nan"), omega=float("nan"), threshold=t,
                         support=len(s), l1=float(np.abs(est).sum()),
                         f1=f1_score(s, truth),
                         mse=mse_ab(est, ab_true) if ab_true is not None else float("nan"),
                         fpr=fpr[i], tpr=tpr[i]))
    return rows


def _path_rows(path: PathResult, truth, ab_true):
    k = path.fits[0].coefs.k
    fpr, tpr = _rates(path.selected, truth, k)
    return [dict(grid_index=i, lam=f.spec.lam, omega=f.spec.omega, threshold=float("nan"),
                 support=len(s), l1=l1, f1=f1_score(s, truth),
                 mse=mse_ab(f.coefs.ab, ab_true) if ab_true is not None else float("nan"),
                 fpr=fpr[i], tpr=tpr[i])
            for i, (f, s, l1) in enumerate(zip(path.fits, path.selected, path.l1_norms))]


def _method_specs(method, lams, phi):
    if method == "TSLasso":
        return [PenaltySpec(0.0, phi, float(w)) for w in lams]
    return make_grid(lams, phi, _RULE_OF[method])


def compare_replicate(job) -> dict:
    """Fit every method on one dataset; module level so it can run in a worker.

    ``job`` is ``(rep, data, truth, methods, settings)``.  With a truth record
    the result holds per-grid-point metrics, AUC, matched tables and the
    CV-tuned point; without one only the tuned selections and effects.
    """
    rep, data, truth, methods, cfg = job
    sdata = standardize(data)
    lams = lambda_grid(cfg["n_lambda"], cfg["lambda_min"], cfg["lambda_max"])
    opts = SolverOptions(max_iter=cfg["max_iter"])
    tset = set(truth["true_set"]) if truth else None
    ab_true = (np.asarray(truth["ab_true_standardized"])
               if truth and "ab_true_standardized" in truth else None)
    out = {"rep": rep, "grid": [], "metrics": {}, "tuned": {}, "paths": {}}
    for method in methods:
        if method == "BK":
            res = bk_fit(sdata, q=cfg["q"])
            sel = frozenset(j for j, r in enumerate(res) if r.selected)
            ab = np.nan_to_num(np.array([r.ab_hat for r in res]))
            tuned_ab = np.where(np.isin(np.arange(data.k), list(sel)), ab, 0.0)
            out["tuned"][method] = (sel, tuned_ab)
            if tset is not None:
                rows = _bk_rows(res, tset, ab_true)
                auc = roc_curve(np.array([r.p_value for r in res]), tset).auc
                out["grid"] += [dict(method=method, **r) for r in rows]
                out["metrics"][method] = _point_metrics(auc, sel, tuned_ab, tset, ab_true, None)
            continue
        specs = _method_specs(method, lams, cfg["phi"])
        path = fit_path(sdata, specs, opts, method=method)
        out["paths"][method] = path
        chosen_idx = None
        if cfg["folds"]:
            cv = cross_validate(sdata, specs, cfg["folds"], replicate_seed(cfg["seed"], rep), opts)
            chosen_idx = cv.chosen
        else:
            chosen_idx = len(specs) - 1
        fitc = path.fits[chosen_idx]
        sel = path.selected[chosen_idx]
        out["tuned"][method] = (sel, fitc.coefs.ab)
        if tset is not None:
            rows = _path_rows(path, tset, ab_true)
            auc = roc_curve(path, tset).auc
            out["grid"] += [dict(method=method, **r) for r in rows]
            out["metrics"][method] = _point_metrics(auc, sel, fitc.coefs.ab, tset, ab_true,
                                                    fitc.spec)
            out["metrics"][method]["converged"] = sum(f.converged for f in path.fits)
    if tset is not None and out["paths"]:
        out["matched"] = matched_curves(out["paths"], tset, ab_true)
    out.pop("paths")
    return out


def _point_metrics(auc, sel, ab, truth, ab_true, spec):
    return {"auc": auc, "f1": f1_score(sel, truth), "support": len(sel),
            "mse": mse_ab(ab, ab_true) if ab_true is not None else float("nan"),
            "lambda": spec.lam if spec else float("nan"),
            "omega": spec.omega if spec else float("nan")}


def _discover(path: Path):
    if path.is_dir():
        files = sorted(path.glob("dataset_*.csv"))
        if not files:
            raise FileNotFoundError(f"no dataset_*.csv files in {path}")
    elif path.is_file():
        files = [path]
    else:
        raise FileNotFoundError(f"input not found: {path}")
    return files


def cmd_compare(args) -> None:
    if not args.input:
        raise UsageError("--input is required")
    files = _discover(Path(args.input))
    if args.reps is not None:
        if args.reps < 1:
            raise UsageError("--reps must be at least 1")
        files = files[: args.reps]
    methods = [m.strip() for m in args.methods.split(",")] if args.methods else list(METHODS)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise UsageError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")
    truths = []
    for f in files:
        tf = f.with_name(f.name.replace("dataset_", "truth_").replace(".csv", ".json"))
        truths.append(io.read_json(tf) if tf.exists() else None)
    have = [t is not None for t in truths]
    mode = args.mode
    if mode == "auto":
        mode = "metrics" if all(have) else "stability"
    if mode == "metrics" and not all(have):
        raise UsageError("metrics mode needs a truth JSON next to every dataset")
    if mode == "stability":
        truths = [None] * len(files)
        if len(files) < 2:
            raise UsageError("stability mode needs at least two datasets")
    cfg = {"n_lambda": args.n_lambda, "lambda_min": args.lambda_min,
           "lambda_max": args.lambda_max, "phi": args.phi, "folds": args.folds,
           "seed": args.seed, "q": args.q, "max_iter": args.max_iter}
    jobs = [(i, io.read_dataset(f), t, methods, cfg) for i, (f, t) in enumerate(zip(files, truths))]
    with _mapper(args.threads) as map_fn:
        results = list(map_fn(compare_replicate, jobs))
    out = io.ensure_dir(args.output_dir)
    if mode == "metrics":
        _write_metrics(out, results, methods)
    else:
        _write_stability(out, results, methods)
    _write_config(out, args)


def _write_metrics(out: Path, results, methods) -> None:
    gcols = ["method", "replicate", "grid_index", "lambda", "omega", "p_threshold",
             "support", "l1_ab", "f1", "mse_ab_sum", "fpr", "tpr"]
    io.write_rows(out / "path_metrics.csv", gcols,
                  ([r["method"], res["rep"], r["grid_index"], r["lam"], r["omega"],
                    r["threshold"], r["support"], r["l1"], r["f1"], r["mse"], r["fpr"], r["tpr"]]
                   for res in results for r in res["grid"]))
    mcols = ["auc", "f1", "mse", "support", "lambda", "omega"]
    io.write_rows(out / "replicate_metrics.csv",
                  ["method", "replicate", "auc", "f1_tuned", "mse_ab_sum_tuned",
                   "support_tuned", "lambda_tuned", "omega_tuned"],
                  ([m, res["rep"], *(res["metrics"][m][c] for c in mcols)]
                   for res in results for m in methods))
    io.write_rows(out / "matched_support.csv",
                  ["method", "replicate", "target_support", "grid_index", "lambda", "omega",
                   "support", "f1"],
                  ([r["method"], res["rep"], r["target_support"], r["grid_index"], r["lam"],
                    r["omega"], r["support"], r["f1"]]
                   for res in results for r in res.get("matched", {}).get("support", [])))
    io.write_rows(out / "matched_l1.csv",
                  ["method", "replicate", "target_l1", "grid_index", "lambda", "omega",
                   "l1_ab", "mse_ab_sum"],
                  ([r["method"], res["rep"], r["target_l1"], r["grid_index"], r["lam"],
                    r["omega"], r["l1"], r["mse"]]
                   for res in results for r in res.get("matched", {}).get("l1", [])))
    rows = []
    for m in methods:
        for c in ("auc", "f1", "mse", "support"):
            vals = np.array([res["metrics"][m][c] for res in results], dtype=float)
            sd = float(vals.std(ddof=1)) if vals.size > 1 else float("nan")
            rows.append([m, {"mse": "mse_ab_sum"}.get(c, c), float(vals.mean()), sd, vals.size])
    io.write_rows(out / "summary.csv", ["method", "metric", "mean", "sd", "replicates"], rows)


def _write_stability(out: Path, results, methods) -> None:
    rows = []
    for m in methods:
        for r1, r2 in combinations(results, 2):
            s1, ab1 = r1["tuned"][m]
            s2, ab2 = r2["tuned"][m]
            rows.append([m, r1["rep"], r2["rep"], jaccard(s1, s2), l2_difference(ab1, ab2),
                         len(s1), len(s2)])
    io.write_rows(out / "stability.csv",
                  ["method", "replicate_1", "replicate_2", "jaccard", "l2_difference",
                   "support_1", "support_2"], rows)
    summ = []
    for m in methods:
        for col, name in ((3, "jaccard"), (4, "l2_difference")):
            vals = np.array([r[col] for r in rows if r[0] == m])
            sd = float(vals.std(ddof=1)) if vals.size > 1 else float("nan")
            summ.append([m, name, float(vals.mean()), sd, vals.size])
    io.write_rows(out / "summary.csv", ["method", "metric", "mean", "sd", "pairs"], summ)


# ---------------------------------------------------------------------------
# refit

def _read_selection(arg: Optional[str], names) -> List[int]:
    if arg is None or arg == "":
        return []
    p = Path(arg)
    if p.suffix == ".json" or p.exists():
        obj = io.read_json(p)
        labels = obj["selected"] if isinstance(obj, dict) else obj
    else:
        labels = [s.strip() for s in arg.split(",") if s.strip()]
    index = {n: j for j, n in enumerate(names)}
    missing = [l for l in labels if l not in index]
    if missing:
        raise UsageError(f"unknown mediators in selection: {missing}")
    return sorted(index[l] for l in labels)


def cmd_refit(args) -> None:
    data, sdata = _load(args)
    target = data if args.raw else sdata
    sel = _read_selection(args.selected, data.column_names)
    report = bootstrap_ci(target, sel, args.resamples, args.level, args.seed)
    out = io.ensure_dir(args.output_dir)
    io.write_refit_csv(out / "refit.csv", report)
    names = data.column_names
    io.write_json(out / "refit.json", {
        "total_effect": report.total_effect, "resamples": report.resamples,
        "level": report.level, "degenerate_draws": report.degenerate_draws,
        "scale": "raw" if args.raw else "standardized",
        "c_refit": report.coefs.c,
        "pathways": [{"pathway": r.pathway, "a": report.coefs.a[r.index],
                      "b": report.coefs.b[r.index], "ab_refit": r.ab_refit,
                      "ci_low": r.ci_low, "ci_high": r.ci_high, "significant": r.significant,
                      "proportion_mediated": r.proportion_mediated,
                      "ci_covers_estimate": r.covers_estimate} for r in report.rows],
        "selected": [names[j] for j in sel]})
    flagged = [r.pathway for r in report.rows if not r.covers_estimate]
    if flagged:
        log.warning("percentile interval excludes the point estimate for %s", flagged)
    _write_config(out, args)


# ---------------------------------------------------------------------------
# parser

def _shared(p, need_input=True):
    p.add_argument("--input", default=None, help="dataset CSV (or directory for compare)")
    p.add_argument("--output-dir", default="out", help="directory for all outputs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", default=None, help="JSON file of parameters; flags override it")


def _solver_flags(p):
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--tol-primal", type=float, default=1e-6)
    p.add_argument("--tol-change", type=float, default=1e-8)
    p.add_argument("--c-penalty", choices=("l1", "product"), default="l1")


def _grid_flags(p):
    p.add_argument("--method", choices=("pathlasso", "tslasso"), default="pathlasso")
    p.add_argument("--phi", type=float, default=2.0)
    p.add_argument("--omega-rule", choices=OMEGA_RULES, default="zero")
    p.add_argument("--omega", type=float, default=0.0, help="omega for --omega-rule fixed")
    p.add_argument("--n-lambda", type=int, default=50)
    p.add_argument("--lambda-min", type=float, default=1e-6)
    p.add_argument("--lambda-max", type=float, default=1e2)
    p.add_argument("--w2", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathlasso",
                                     description="Pathway lasso for high-dimensional mediation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate datasets from the default design")
    _shared(p)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--rho-m", type=float, default=0.0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--n-true", type=int, default=None)
    p.add_argument("--c-true", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--binary-treatment", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit one set of tuning parameters")
    _shared(p)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=2.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--w2", type=float, default=1.0)
    p.add_argument("--dump-prox", action="store_true",
                   help="write the final pairwise subproblems to prox_debug.csv")
    _solver_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("path", help="fit a warm-started lambda path")
    _shared(p)
    _grid_flags(p)
    _solver_flags(p)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("cv", help="choose tuning parameters by K-fold cross-validation")
    _shared(p)
    _grid_flags(p)
    _solver_flags(p)
    p.add_argument("--folds", type=int, default=10)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("compare", help="run BK, TSLasso and PathLasso on simulated replicates")
    _shared(p)
    p.add_argument("--methods", default=None, help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--reps", type=int, default=None, help="use only the first N datasets")
    p.add_argument("--mode", choices=("auto", "metrics", "stability"), default="auto")
    p.add_argument("--phi", type=float, default=2.0)
    p.add_argument("--n-lambda", type=int, default=50)
    p.add_argument("--lambda-min", type=float, default=1e-6)
    p.add_argument("--lambda-max", type=float, default=1e2)
    p.add_argument("--folds", type=int, default=10, help="0 skips cross-validation")
    p.add_argument("--q", type=float, default=0.05, help="BH false discovery rate for BK")
    p.add_argument("--max-iter", type=int, default=10000)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("refit", help="unpenalized refit with bootstrap intervals")
    _shared(p)
    p.add_argument("--selected", default=None,
                   help="selected.json from cv, or a comma list of mediator names")
    p.add_argument("--resamples", type=int, default=500)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--raw", action="store_true", help="refit on the raw (unstandardized) scale")
    p.set_defaults(func=cmd_refit)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = io.read_json(args.config)
        if not isinstance(cfg, dict):
            raise io.DataFormatError(f"{args.config}: expected a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()
               if k not in ("command",) and k.replace("-", "_") not in _EXECUTION_ONLY}
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known
        if unknown:
            raise io.DataFormatError(f"{args.config}: unknown keys {sorted(unknown)}")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    logging.getLogger("pathlasso.admm").setLevel(logging.ERROR)
    try:
        args = parse_args(argv)
        args.func(args)
    except (io.DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
