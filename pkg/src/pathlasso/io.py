"""File formats: dataset CSV, truth JSON, and the result tables.

Floats are written with ``repr`` (shortest round-trip form), so a table read
back parses to the identical doubles and reruns produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, List, Mapping, Optional, Sequence

import numpy as np

from .admm import FitResult, PathResult
from .core import MediationDataset


class DataFormatError(Exception):
    """A file exists but cannot be parsed into the expected structure."""


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _clean(obj):
    """Convert numpy scalars/arrays and non-finite floats for JSON output."""
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_clean(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_clean(obj), fh, indent=2)
        fh.write("\n")


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid JSON ({exc})") from exc


# ---------------------------------------------------------------------------
# dataset

def read_dataset(path) -> MediationDataset:
    """Read a dataset CSV with columns ``Z``, the mediators, and ``R``.

    Every column other than Z and R is a mediator, in file order.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header.count("Z") != 1 or header.count("R") != 1:
        raise DataFormatError(f"{path}: header needs exactly one 'Z' and one 'R' column")
    if len(set(header)) != len(header):
        raise DataFormatError(f"{path}: duplicate column names")
    med = [i for i, h in enumerate(header) if h not in ("Z", "R")]
    if not med:
        raise DataFormatError(f"{path}: no mediator columns")
    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(v) for v in r] for r in body], dtype=float)
    except ValueError as exc:
        raise DataFormatError(f"{path}: non-numeric value ({exc})") from exc
    if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] != len(header):
        raise DataFormatError(f"{path}: ragged or empty data rows")
    return MediationDataset(data[:, header.index("Z")], data[:, med],
                            data[:, header.index("R")], [header[i] for i in med])


def write_dataset(path, data: MediationDataset) -> None:
    header = ["Z", *data.column_names, "R"]
    rows = (np.concatenate([[data.z[i]], data.m[i], [data.r[i]]]) for i in range(data.n))
    write_rows(path, header, ([float(v) for v in row] for row in rows))


# ---------------------------------------------------------------------------
# result tables

def path_header(names: Sequence[str]) -> List[str]:
    return (["lambda", "phi", "omega", "converged", "iterations", "objective", "C"]
            + [f"A_{n}" for n in names] + [f"B_{n}" for n in names]
            + [f"AB_{n}" for n in names])


def _path_row(fit: FitResult):
    s, c = fit.spec, fit.coefs
    return [s.lam, s.phi, s.omega, fit.converged, fit.iterations, fit.objective, c.c,
            *c.a.tolist(), *c.b.tolist(), *c.ab.tolist()]


def write_path_csv(path, result: PathResult, names: Sequence[str]) -> None:
    write_rows(path, path_header(names), (_path_row(f) for f in result.fits))


def path_summary(result: PathResult, names: Sequence[str]) -> dict:
    return {
        "method": result.method,
        "cutoff": result.cutoff,
        "points": len(result),
        "converged": sum(f.converged for f in result.fits),
        "grid": [{"lambda": f.spec.lam, "phi": f.spec.phi, "omega": f.spec.omega,
                  "converged": f.converged, "iterations": f.iterations,
                  "objective": f.objective, "support": len(sel),
                  "l1_ab": l1, "selected": [names[j] for j in sorted(sel)]}
                 for f, sel, l1 in zip(result.fits, result.selected, result.l1_norms)],
    }


BK_HEADER = ["mediator", "a", "se_a", "b", "se_b", "ab", "z", "p", "selected"]


def write_bk_csv(path, results) -> None:
    write_rows(path, BK_HEADER, ([r.mediator, r.a_hat, r.se_a, r.b_hat, r.se_b, r.ab_hat,
                                  r.z_stat, r.p_value, r.selected] for r in results))


def cv_report_json(report, names: Optional[Sequence[str]] = None) -> dict:
    return {
        "folds": report.folds,
        "seed": report.seed,
        "chosen": report.chosen,
        "chosen_spec": _spec_dict(report.chosen_spec),
        "fold_ids": report.fold_ids,
        "grid": [dict(_spec_dict(s), mean_loss=float(m), fold_losses=report.fold_losses[:, i],
                      converged_folds=int(report.converged[:, i].sum()),
                      chosen=(i == report.chosen))
                 for i, (s, m) in enumerate(zip(report.grid, report.mean_loss))],
    }


def _spec_dict(spec) -> dict:
    w1 = np.atleast_1d(spec.w1)
    return {"lambda": spec.lam, "phi": spec.phi, "omega": spec.omega,
            "w1": float(w1[0]) if np.all(w1 == w1[0]) else w1, "w2": spec.w2}


REFIT_HEADER = ["pathway", "ab_refit", "ci_low", "ci_high", "significant",
                "proportion_mediated"]


def write_refit_csv(path, report) -> None:
    write_rows(path, REFIT_HEADER, ([r.pathway, r.ab_refit, r.ci_low, r.ci_high,
                                     r.significant, r.proportion_mediated]
                                    for r in report.rows))


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
