"""Command-line front end.

Subcommands: train, predict, evaluate, cv, ablate, degrade, sweep, synth.
Every command taking --seed is fully deterministic in its output bytes.
Non-convergence of the solver is reported in the output, never via the exit
code; module errors print a diagnostic and exit nonzero.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import data as dio
from .degrade import degrade
from .errors import LdlError
from .metrics import METRIC_NAMES, evaluate
from .report import ResultRow, fmt, render, render_counts, report_rows, rows_from_stats
from .solver import fit, load_model, predict, save_model
from .types import Hyperparams, Variant, parse_degradation

PARAM_GRID_DEFAULT = (0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 10.0)


def _add_hp_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.1, help="nuclear-norm weight")
    p.add_argument("--lambda", dest="lam", type=float, default=0.1, help="ridge weight")
    p.add_argument("--degrade", dest="degrade_spec", default="threshold:0.5",
                   metavar="KIND:VALUE", help="threshold:T or topk:K")
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-5)


def _add_common(p: argparse.ArgumentParser, variant: bool = True) -> None:
    if variant:
        p.add_argument("--variant", choices=[v.value for v in Variant], default="full")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", dest="fmt", choices=["csv", "md"], default="md")
    p.add_argument("--no-standardize", action="store_true",
                   help="skip z-scoring of features")
    p.add_argument("--no-bias", action="store_true",
                   help="do not append a constant-1 feature column")


def _hyperparams(args) -> Hyperparams:
    return Hyperparams(
        alpha=args.alpha,
        lam=args.lam,
        degradation=parse_degradation(args.degrade_spec),
        max_iters=args.max_iters,
        tol=args.tol,
    )


def _fit_kwargs(args) -> dict:
    return {
        "standardize_features": not args.no_standardize,
        "add_bias": not args.no_bias,
    }


def _cv_rows(
    ds, variants: Sequence[Variant], hp: Hyperparams, folds: int, seed: int,
    fit_kwargs: dict, grid: Optional[dict] = None, holdout: Optional[float] = None,
    variant_tag=lambda v: v.value,
) -> List[ResultRow]:
    """Cross-validated (or holdout) mean±std rows for each variant."""
    if holdout is not None:
        rng = np.random.default_rng(seed)
        perm = rng.permutation(ds.n)
        n_test = max(1, int(round(ds.n * holdout)))
        splits = [(perm[n_test:], perm[:n_test])]
    else:
        plan = dio.kfold(ds.n, folds, seed)
        splits = [plan.split(f) for f in range(plan.k)]
    rows: List[ResultRow] = []
    for variant in variants:
        fold_scores = {name: [] for name in METRIC_NAMES}
        for train_idx, test_idx in splits:
            hp_used = hp
            if grid:
                hp_used = _tune(ds, train_idx, variant, hp, grid, seed, fit_kwargs)
            Xtr = ds.X.data[train_idx]
            Dtr = ds.D.data[:, train_idx]
            res = fit(Xtr, Dtr, hp_used, variant, **fit_kwargs)
            pred = predict(res.model, ds.X.data[test_idx])
            rep = evaluate(ds.D.data[:, test_idx], pred)
            for name in METRIC_NAMES:
                fold_scores[name].append(rep.mean(name))
        means = {k: float(np.mean(v)) for k, v in fold_scores.items()}
        stds = {k: float(np.std(v)) for k, v in fold_scores.items()}
        rows += rows_from_stats(ds.name, variant_tag(variant), means, stds)
    return rows


def _tune(ds, train_idx, variant, hp, grid, seed, fit_kwargs) -> Hyperparams:
    """Inner 5-fold grid search on the training split, selecting by mean KL."""
    alphas = grid.get("alpha", (hp.alpha,))
    lams = grid.get("lambda", (hp.lam,))
    inner = dio.kfold(len(train_idx), 5, seed)
    best = None
    for a, l in itertools.product(alphas, lams):
        cand = Hyperparams(alpha=a, lam=l, degradation=hp.degradation,
                           max_iters=hp.max_iters, tol=hp.tol)
        kls = []
        for f in range(inner.k):
            tr, te = inner.split(f)
            Xtr = ds.X.data[train_idx[tr]]
            Dtr = ds.D.data[:, train_idx[tr]]
            res = fit(Xtr, Dtr, cand, variant, **fit_kwargs)
            pred = predict(res.model, ds.X.data[train_idx[te]])
            kls.append(evaluate(ds.D.data[:, train_idx[te]], pred).kl)
        score = float(np.mean(kls))
        if best is None or score < best[0]:
            best = (score, cand)
    return best[1]


def _parse_grid(spec: str) -> dict:
    """Parse 'alpha=0.005,0.01;lambda=0.1,1' into value tuples."""
    grid = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, values = part.partition("=")
        key = key.strip().lower()
        if not sep or key not in ("alpha", "lambda"):
            raise ValueError(f"bad grid component {part!r}")
        grid[key] = tuple(float(v) for v in values.split(",") if v.strip())
    if not grid:
        raise ValueError("empty grid spec")
    return grid


def cmd_synth(args) -> int:
    ds = dio.synth_lowrank(args.n, args.d, args.m, args.r, args.noise, args.seed)
    dio.save_dataset(ds, args.out)
    print(f"wrote {ds.name}: n={ds.n} d={ds.d} m={ds.m} -> {args.out}")
    return 0


def cmd_train(args) -> int:
    ds = dio.load_dataset(args.dataset)
    hp = _hyperparams(args)
    res = fit(ds.X, ds.D, hp, args.variant, **_fit_kwargs(args))
    save_model(res.model, args.model_out)
    conv = "yes" if res.converged else "NO (max iterations reached)"
    print(f"variant={args.variant} iterations={res.iterations_run} "
          f"residual={res.final_primal_residual:.6g} converged={conv}")
    pred = predict(res.model, ds.X.data)
    rows = report_rows(ds.name, f"{args.variant}[train]", evaluate(ds.D.data, pred))
    print(render(rows, args.fmt), end="")
    print(f"model written to {args.model_out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    ds = dio.load_dataset(args.dataset)
    pred = predict(model, ds.X.data)
    lines = [" ".join(f"{v:.17g}" for v in col) for col in pred.T]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {pred.shape[1]} predictions to {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    ds = dio.load_dataset(args.dataset)
    pred = predict(model, ds.X.data)
    rows = report_rows(ds.name, model.variant.value, evaluate(ds.D.data, pred))
    print(render(rows, args.fmt), end="")
    return 0


def cmd_cv(args) -> int:
    ds = dio.load_dataset(args.dataset)
    hp = _hyperparams(args)
    variants = [Variant(v.strip()) for v in args.variants.split(",") if v.strip()]
    grid = _parse_grid(args.grid) if args.grid else None
    rows = _cv_rows(ds, variants, hp, args.folds, args.seed, _fit_kwargs(args), grid=grid)
    print(render(rows, args.fmt), end="")
    return 0


def cmd_ablate(args) -> int:
    if args.holdout is not None and not (0.0 < args.holdout < 1.0):
        raise ValueError(f"--holdout must lie in (0, 1), got {args.holdout}")
    ds = dio.load_dataset(args.dataset)
    hp = _hyperparams(args)
    variants = [Variant.FULL, Variant.ABLATION_A, Variant.ABLATION_B]
    rows = _cv_rows(ds, variants, hp, args.folds, args.seed, _fit_kwargs(args),
                    holdout=args.holdout)
    print(render(rows, args.fmt), end="")
    return 0


def cmd_degrade(args) -> int:
    ds = dio.load_dataset(args.dataset)
    setting = parse_degradation(args.degrade_spec)
    L = degrade(ds.D, setting)
    counts = L.data.sum(axis=0).astype(int)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(f"{L.n} {L.m}\n")
            for col in L.data.T:
                fh.write(" ".join(str(int(v)) for v in col) + "\n")
    print(render_counts(list(counts), args.fmt), end="")
    if args.out:
        print(f"multi-label matrix written to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    ds = dio.load_dataset(args.dataset)
    hp = _hyperparams(args)
    values = ([float(v) for v in args.values.split(",")]
              if args.values else list(PARAM_GRID_DEFAULT))
    variant = Variant(args.variant)
    rows: List[ResultRow] = []
    for value in values:
        if args.param == "alpha":
            hp_v = Hyperparams(alpha=value, lam=hp.lam, degradation=hp.degradation,
                               max_iters=hp.max_iters, tol=hp.tol)
        else:
            hp_v = Hyperparams(alpha=hp.alpha, lam=value, degradation=hp.degradation,
                               max_iters=hp.max_iters, tol=hp.tol)
        tag = f"{variant.value}[{args.param}={value:g}]"
        rows += _cv_rows(ds, [variant], hp_v, args.folds, args.seed, _fit_kwargs(args),
                         variant_tag=lambda v, tag=tag: tag)
    print(render(rows, args.fmt), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldlkit",
        description="Label-distribution learning with low-rank auxiliary multi-label structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset file")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--d", type=int, default=20)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a model on a full dataset")
    p.add_argument("dataset")
    p.add_argument("--model-out", required=True)
    _add_hp_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict distributions for a dataset's features")
    p.add_argument("dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a saved model on a dataset")
    p.add_argument("dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--format", dest="fmt", choices=["csv", "md"], default="md")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("cv", help="k-fold cross-validation, optionally with grid search")
    p.add_argument("dataset")
    p.add_argument("--variants", default="full",
                   help="comma list from full,ablation-a,ablation-b")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--grid", help="e.g. 'alpha=0.005,0.1;lambda=0.1,1'")
    _add_hp_flags(p)
    _add_common(p, variant=False)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("ablate", help="compare full vs ablation variants")
    p.add_argument("dataset")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--holdout", type=float,
                   help="use a single holdout split of this fraction instead of k folds")
    _add_hp_flags(p)
    _add_common(p, variant=False)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("degrade", help="degrade distributions to a multi-label matrix")
    p.add_argument("dataset")
    p.add_argument("--degrade", dest="degrade_spec", default="threshold:0.5",
                   metavar="KIND:VALUE")
    p.add_argument("--out", help="write the binary matrix to this file")
    p.add_argument("--format", dest="fmt", choices=["csv", "md"], default="md")
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("sweep", help="metric-vs-value table for alpha or lambda")
    p.add_argument("dataset")
    p.add_argument("--param", choices=["alpha", "lambda"], required=True)
    p.add_argument("--values", help="comma list; defaults to the 7-point candidate set")
    p.add_argument("--folds", type=int, default=10)
    _add_hp_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LdlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
