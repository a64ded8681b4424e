"""Joint low-rank solver for label-distribution regression.

The full variant fits a linear regressor W on the label distributions while an
auxiliary multi-label task ties the labels together: the degraded binary
matrix L is reconstructed from the true distributions through an
instance-mixing matrix O, and the predicted multi-label matrix W X' O is
pushed toward low rank through a nuclear-norm penalty.  Splitting that penalty
onto an auxiliary variable G (constrained to equal W X' O) yields alternating
closed-form updates plus a singular-value-thresholding step:

    minimize_{W,O,G}  1/2 ||W X' - D||_F^2 + ||D O - L||_F^2 + alpha ||G||_*
                      + lam (||W||_F^2 + ||O||_F^2)
    subject to        W X' O = G.

All subproblems are solved exactly (SPD factorizations, no explicit
inverses), the coupling penalty grows geometrically up to ``mu_max``, and the
stopping rule combines the relative constraint residual with the relative
change of W.  Everything is deterministic: there is no randomized
initialization.

Ablation variants: ``ablation-a`` keeps the nuclear-norm pressure but applies
it directly to the prediction W X' (no auxiliary task); ``ablation-b`` is
plain ridge regression.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
import scipy.linalg

from .degrade import degrade
from .errors import DimensionMismatch, SingularSystem, SvdFailure
from .types import (
    FeatureMatrix,
    Hyperparams,
    LabelDistributionMatrix,
    LdlModel,
    SolverState,
    Standardizer,
    Variant,
    validate_distribution_matrix,
)

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class FitResult:
    model: LdlModel
    iterations_run: int
    final_primal_residual: float
    objective_trace: List[float]
    converged: bool


def svt(A: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding: soft-threshold the spectrum by ``tau``.

    Returns U max(S - tau, 0) V' for the thin SVD A = U S V', which is the
    proximal operator of ``tau * nuclear norm`` at A.
    """
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    A = np.asarray(A, dtype=np.float64)
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(f"SVD did not converge on a {A.shape} matrix") from exc
    s = np.maximum(s - tau, 0.0)
    return (U * s) @ Vt


def _solve_spd(M: np.ndarray, B: np.ndarray, lam: float, what: str) -> np.ndarray:
    """Solve M Z = B for symmetric positive (semi-)definite M."""
    try:
        return scipy.linalg.solve(M, B, assume_a="pos")
    except np.linalg.LinAlgError:
        if lam == 0.0:
            raise SingularSystem(
                f"{what} system is rank-deficient; a positive lambda is required"
            ) from None
    # lam > 0 makes M nonsingular in exact arithmetic; fall back to LU when
    # the Cholesky pivot check is defeated by extreme conditioning.
    try:
        return np.linalg.solve(M, B)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"{what} system is numerically singular") from exc


def update_g(
    W: np.ndarray,
    X: np.ndarray,
    O: np.ndarray,
    multipliers: np.ndarray,
    penalty: float,
    alpha: float,
) -> np.ndarray:
    """Auxiliary-variable step: G = svt(W X' O + multipliers / penalty, alpha / penalty)."""
    if penalty <= 0:
        raise ValueError(f"penalty must be positive, got {penalty}")
    target = W @ X.T @ O + multipliers / penalty
    return svt(target, alpha / penalty)


def update_w(
    X: np.ndarray,
    D: np.ndarray,
    O: np.ndarray,
    G: np.ndarray,
    multipliers: np.ndarray,
    penalty: float,
    lam: float,
) -> np.ndarray:
    """Regressor step: exact stationary point of the W subproblem.

    With mu the coupling penalty, W minimizes
    1/2 ||W X' - D||^2 + lam ||W||^2 + mu/2 ||G - W X' O - multipliers/mu||^2:

        W = (D X + (mu G - multipliers) O' X)
            (X' X + mu X' O O' X + 2 lam I)^-1.
    """
    d = X.shape[1]
    XO = X.T @ O                      # (d, n)
    M = X.T @ X + penalty * (XO @ XO.T) + 2.0 * lam * np.eye(d)
    rhs = D @ X + (penalty * G - multipliers) @ XO.T
    return _solve_spd(M, rhs.T, lam, "W-step").T


def update_o(
    X: np.ndarray,
    W: np.ndarray,
    D: np.ndarray,
    L: np.ndarray,
    G: np.ndarray,
    multipliers: np.ndarray,
    penalty: float,
    lam: float,
) -> np.ndarray:
    """Mapping step: exact stationary point of the O subproblem.

    With P = W X' and mu the coupling penalty, O minimizes
    ||D O - L||^2 + lam ||O||^2 + mu/2 ||G - P O - multipliers/mu||^2:

        O = (2 D'D + mu P'P + 2 lam I)^-1 (2 D'L + P'(mu G - multipliers)).
    """
    n = X.shape[0]
    P = W @ X.T                       # (m, n)
    M = 2.0 * (D.T @ D) + penalty * (P.T @ P) + 2.0 * lam * np.eye(n)
    rhs = 2.0 * (D.T @ L) + P.T @ (penalty * G - multipliers)
    return _solve_spd(M, rhs, lam, "O-step")


def update_multipliers(
    state: SolverState,
    W: np.ndarray,
    X: np.ndarray,
    O: np.ndarray,
    mu_growth: float = 1.1,
    mu_max: float = 1e6,
) -> SolverState:
    """Dual ascent on the coupling constraint plus the penalty schedule.

    The residual G - W X' O is removed from the running multipliers (the dual
    estimate enters the augmented objective with a negative sign), the penalty
    is grown by ``mu_growth`` and capped at ``mu_max``, and the relative primal
    residual ||G - W X' O||_F / max(1, ||G||_F) is recorded.
    """
    residual = state.aux - W @ X.T @ O
    rel = float(np.linalg.norm(residual) / max(1.0, np.linalg.norm(state.aux)))
    return SolverState(
        aux=state.aux,
        multipliers=state.multipliers - state.penalty * residual,
        penalty=min(mu_growth * state.penalty, mu_max),
        iteration=state.iteration + 1,
        primal_residual=rel,
    )


def _ridge(X: np.ndarray, D: np.ndarray, lam: float) -> np.ndarray:
    """Closed-form minimizer of 1/2 ||W X' - D||^2 + lam ||W||^2."""
    d = X.shape[1]
    M = X.T @ X + 2.0 * lam * np.eye(d)
    return _solve_spd(M, (D @ X).T, lam, "ridge").T


def _nuclear_norm(A: np.ndarray) -> float:
    return float(np.linalg.svd(A, compute_uv=False).sum())


def _objective_full(W, O, X, D, L, alpha, lam) -> float:
    P = W @ X.T
    return float(
        0.5 * np.linalg.norm(P - D) ** 2
        + np.linalg.norm(D @ O - L) ** 2
        + alpha * _nuclear_norm(P @ O)
        + lam * (np.linalg.norm(W) ** 2 + np.linalg.norm(O) ** 2)
    )


def _objective_lowrank_pred(W, X, D, alpha, lam) -> float:
    P = W @ X.T
    return float(
        0.5 * np.linalg.norm(P - D) ** 2
        + alpha * _nuclear_norm(P)
        + lam * np.linalg.norm(W) ** 2
    )


def _fit_full(X, D, L, hp: Hyperparams):
    n = X.shape[0]
    m = D.shape[0]
    W = _ridge(X, D, hp.lam)
    O = np.eye(n)
    state = SolverState(
        aux=W @ X.T @ O,
        multipliers=np.zeros((m, n)),
        penalty=hp.mu0,
    )
    trace = []
    converged = False
    for _ in range(hp.max_iters):
        state.aux = update_g(W, X, O, state.multipliers, state.penalty, hp.alpha)
        W_new = update_w(X, D, O, state.aux, state.multipliers, state.penalty, hp.lam)
        w_change = np.linalg.norm(W_new - W) / max(1.0, np.linalg.norm(W))
        W = W_new
        O = update_o(X, W, D, L, state.aux, state.multipliers, state.penalty, hp.lam)
        state = update_multipliers(state, W, X, O, hp.mu_growth, hp.mu_max)
        trace.append(_objective_full(W, O, X, D, L, hp.alpha, hp.lam))
        if state.primal_residual <= hp.tol and w_change <= hp.tol:
            converged = True
            break
    return W, O, state, trace, converged


def _fit_lowrank_prediction(X, D, hp: Hyperparams):
    """Ablation: nuclear norm on W X' itself, same splitting scheme, no O."""
    n = X.shape[0]
    m = D.shape[0]
    W = _ridge(X, D, hp.lam)
    Id = np.eye(X.shape[1])
    In = np.eye(n)
    state = SolverState(
        aux=W @ X.T,
        multipliers=np.zeros((m, n)),
        penalty=hp.mu0,
    )
    trace = []
    converged = False
    for _ in range(hp.max_iters):
        mu = state.penalty
        state.aux = svt(W @ X.T + state.multipliers / mu, hp.alpha / mu)
        M = (1.0 + mu) * (X.T @ X) + 2.0 * hp.lam * Id
        rhs = (D + mu * state.aux - state.multipliers) @ X
        W_new = _solve_spd(M, rhs.T, hp.lam, "W-step").T
        w_change = np.linalg.norm(W_new - W) / max(1.0, np.linalg.norm(W))
        W = W_new
        state = update_multipliers(state, W, X, In, hp.mu_growth, hp.mu_max)
        trace.append(_objective_lowrank_pred(W, X, D, hp.alpha, hp.lam))
        if state.primal_residual <= hp.tol and w_change <= hp.tol:
            converged = True
            break
    return W, state, trace, converged


def fit(
    X,
    D,
    hp: Optional[Hyperparams] = None,
    variant: Union[Variant, str] = Variant.FULL,
    standardize_features: bool = True,
    add_bias: bool = True,
) -> FitResult:
    """Train a label-distribution model.

    Parameters
    ----------
    X : FeatureMatrix or (n, d) array
    D : LabelDistributionMatrix or (m, n) array
    hp : Hyperparams, defaults to ``Hyperparams()``
    variant : "full", "ablation-a" or "ablation-b"
    standardize_features : z-score features before fitting (recorded on the model)
    add_bias : append a constant-1 feature column (recorded on the model)

    Non-convergence within ``hp.max_iters`` is not an error; the result simply
    carries ``converged=False``.
    """
    if not isinstance(X, FeatureMatrix):
        X = FeatureMatrix(X)
    D = validate_distribution_matrix(D)
    if X.n != D.n:
        raise DimensionMismatch(
            f"feature matrix has {X.n} instances but distribution matrix has {D.n}"
        )
    hp = hp or Hyperparams()
    variant = Variant(variant)

    Xw = X.data
    scaler = None
    if standardize_features:
        mean = Xw.mean(axis=0)
        std = Xw.std(axis=0)
        scaler = Standardizer(mean=mean, std=std)
        Xw = scaler.transform(Xw)
    if add_bias:
        Xw = np.hstack([Xw, np.ones((Xw.shape[0], 1))])
    Dw = D.data

    if variant is Variant.ABLATION_B:
        W = _ridge(Xw, Dw, hp.lam)
        model = LdlModel(W=W, variant=variant, hyperparams=hp,
                         standardizer=scaler, bias=add_bias)
        obj = _objective_lowrank_pred(W, Xw, Dw, 0.0, hp.lam)
        return FitResult(model, iterations_run=0, final_primal_residual=0.0,
                         objective_trace=[obj], converged=True)

    if variant is Variant.ABLATION_A:
        W, state, trace, converged = _fit_lowrank_prediction(Xw, Dw, hp)
        model = LdlModel(W=W, variant=variant, hyperparams=hp,
                         standardizer=scaler, bias=add_bias)
        return FitResult(model, state.iteration, state.primal_residual, trace, converged)

    L = degrade(D, hp.degradation).data
    W, O, state, trace, converged = _fit_full(Xw, Dw, L, hp)
    model = LdlModel(W=W, variant=variant, hyperparams=hp,
                     standardizer=scaler, bias=add_bias, transform=O)
    return FitResult(model, state.iteration, state.primal_residual, trace, converged)


def predict(model: LdlModel, x) -> np.ndarray:
    """Predict label distributions for one instance (d,) or a batch (n, d).

    The raw linear scores are projected onto the simplex by clamping negative
    entries to zero and renormalizing; an all-nonpositive score vector falls
    back to the uniform distribution.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = x[np.newaxis, :] if single else x
    if X.ndim != 2 or X.shape[1] != model.d_in:
        raise DimensionMismatch(
            f"expected feature dimension {model.d_in}, got shape {x.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite entries")
    if model.standardizer is not None:
        X = model.standardizer.transform(X)
    if model.bias:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    raw = model.W @ X.T                                  # (m, batch)
    raw = np.maximum(raw, 0.0)
    totals = raw.sum(axis=0)
    flat = totals <= 0.0
    if np.any(flat):
        raw[:, flat] = 1.0
        totals = raw.sum(axis=0)
    out = raw / totals
    return out[:, 0] if single else out


def save_model(model: LdlModel, path) -> None:
    """Serialize a model to a versioned binary container (bit-exact W)."""
    hp = model.hyperparams
    fields = {
        "format_version": np.int64(MODEL_FORMAT_VERSION),
        "W": model.W,
        "variant": np.str_(model.variant.value),
        "bias": np.bool_(model.bias),
        "alpha": np.float64(hp.alpha),
        "lam": np.float64(hp.lam),
        "degradation": np.str_(str(hp.degradation)),
        "mu0": np.float64(hp.mu0),
        "mu_max": np.float64(hp.mu_max),
        "mu_growth": np.float64(hp.mu_growth),
        "max_iters": np.int64(hp.max_iters),
        "tol": np.float64(hp.tol),
        "has_standardizer": np.bool_(model.standardizer is not None),
    }
    if model.standardizer is not None:
        fields["feature_mean"] = model.standardizer.mean
        fields["feature_std"] = model.standardizer.std
    with open(path, "wb") as fh:
        np.savez(fh, **fields)


def load_model(path) -> LdlModel:
    """Load a model written by :func:`save_model`."""
    from .types import parse_degradation

    with np.load(path, allow_pickle=False) as z:
        version = int(z["format_version"])
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {version}")
        hp = Hyperparams(
            alpha=float(z["alpha"]),
            lam=float(z["lam"]),
            degradation=parse_degradation(str(z["degradation"])),
            mu0=float(z["mu0"]),
            mu_max=float(z["mu_max"]),
            mu_growth=float(z["mu_growth"]),
            max_iters=int(z["max_iters"]),
            tol=float(z["tol"]),
        )
        scaler = None
        if bool(z["has_standardizer"]):
            scaler = Standardizer(mean=z["feature_mean"], std=z["feature_std"])
        return LdlModel(
            W=z["W"],
            variant=Variant(str(z["variant"])),
            hyperparams=hp,
            standardizer=scaler,
            bias=bool(z["bias"]),
        )
