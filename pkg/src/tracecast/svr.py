"""Epsilon-insensitive support vector regression with an RBF kernel.

The dual is solved directly in the net coefficients beta_i = alpha_i -
alpha_i^* (at any optimum at most one of the pair is nonzero, so beta loses
nothing):

    minimize  0.5 * beta' K beta - y' beta + epsilon * sum |beta_i|
    s.t.      sum beta_i = 0,   -C <= beta_i <= C

by pairwise coordinate descent: the single equality constraint means the
smallest feasible move changes two coordinates by +/-delta, and the
one-dimensional piecewise-quadratic subproblem in delta has a closed-form
minimizer per sign region. The working pair is the maximally KKT-violating
one. Starting from beta = 0 the equality constraint holds exactly throughout.

Inputs (times) and targets are shifted/scaled to zero mean, unit standard
deviation per training window before solving, so gamma and epsilon keep a
consistent meaning across windows at different absolute times.

A regime selector picks one of four pre-tuned hyperparameter sets from the
recent speed profile (high-and-constant, dip-and-recover, decay-to-stop,
start-from-stop) before each windowed fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    ConvergenceError,
    InsufficientHistoryError,
    ValidationError,
)
from .interp import HorizonRule, Sample3, horizon_time
from .trace import Trajectory, derive_speeds

__all__ = [
    "SvrParams",
    "SvrModel",
    "RegimeLabel",
    "RegimeThresholds",
    "DEFAULT_REGIME_PARAMS",
    "DEFAULT_THRESHOLDS",
    "rbf_kernel",
    "svr_train",
    "svr_predict",
    "dual_objective",
    "kkt_gap",
    "classify_regime",
    "svr_predict_position",
]

_BOUND_TOL = 1e-12  # |beta| below this counts as 0; within this of C counts as bound


@dataclass(frozen=True)
class SvrParams:
    C: float = 100.0
    epsilon: float = 0.01
    gamma: float = 0.1
    tolerance: float = 1e-4
    max_passes: int = 20000

    def __post_init__(self):
        if self.C <= 0 or not math.isfinite(self.C):
            raise ValidationError(f"C must be positive and finite, got {self.C}")
        if self.epsilon < 0:
            raise ValidationError("epsilon must be >= 0")
        if self.gamma <= 0:
            raise ValidationError("gamma must be > 0")
        if self.tolerance <= 0:
            raise ValidationError("tolerance must be > 0")
        if self.max_passes < 1:
            raise ValidationError("max_passes must be >= 1")


@dataclass(frozen=True)
class SvrModel:
    """Trained dual solution in normalized units."""

    betas: np.ndarray  # alpha_i - alpha_i^*, each in [-C, C], sums to 0
    bias: float
    inputs: np.ndarray  # normalized training times
    targets: np.ndarray  # normalized training targets (kept for KKT checks)
    params: SvrParams
    input_scaler: tuple[float, float]  # (mean, scale)
    target_scaler: tuple[float, float]
    kkt_residual: float
    objective_trace: tuple[float, ...] = field(default=(), repr=False)


class RegimeLabel(Enum):
    SVR1 = "SVR1"  # high, roughly constant speed
    SVR2 = "SVR2"  # dips then recovers (turn)
    SVR3 = "SVR3"  # low / decaying to a stop
    SVR4 = "SVR4"  # pulling away from a stop


@dataclass(frozen=True)
class RegimeThresholds:
    high_speed: float = 20.0
    low_speed: float = 5.0
    stop_speed: float = 0.5
    slope_eps: float = 0.2

    def __post_init__(self):
        if not (0 <= self.stop_speed < self.low_speed < self.high_speed):
            raise ValidationError("need 0 <= stop_speed < low_speed < high_speed")
        if self.slope_eps <= 0:
            raise ValidationError("slope_eps must be > 0")


DEFAULT_THRESHOLDS = RegimeThresholds()

DEFAULT_REGIME_PARAMS: dict[RegimeLabel, SvrParams] = {
    RegimeLabel.SVR1: SvrParams(C=100.0, epsilon=0.01, gamma=0.1),
    RegimeLabel.SVR2: SvrParams(C=100.0, epsilon=0.01, gamma=1.0),
    RegimeLabel.SVR3: SvrParams(C=10.0, epsilon=0.05, gamma=1.0),
    RegimeLabel.SVR4: SvrParams(C=10.0, epsilon=0.05, gamma=1.0),
}


def rbf_kernel(a, b, gamma: float) -> float:
    """exp(-gamma * ||a - b||^2); 1 at zero distance."""
    av = np.atleast_1d(np.asarray(a, dtype=float))
    bv = np.atleast_1d(np.asarray(b, dtype=float))
    if av.shape != bv.shape:
        raise ValidationError(f"dimension mismatch: {av.shape} vs {bv.shape}")
    if not (np.all(np.isfinite(av)) and np.all(np.isfinite(bv))):
        raise ValidationError("non-finite kernel input")
    d = av - bv
    return float(np.exp(-gamma * float(d @ d)))


def _kernel_matrix(z: np.ndarray, gamma: float) -> np.ndarray:
    d = z[:, None] - z[None, :]
    return np.exp(-gamma * d * d)


def dual_objective(K: np.ndarray, y: np.ndarray, beta: np.ndarray, eps: float) -> float:
    return float(0.5 * beta @ K @ beta - y @ beta + eps * np.sum(np.abs(beta)))


def _bias_intervals(beta, F, eps, C):
    """Per-sample feasible interval [lo, hi] for the bias multiplier.

    At an exact optimum the intervals all intersect; the residual
    max(lo) - min(hi) measures the worst KKT violation.
    """
    lo = np.full(beta.shape, -np.inf)
    hi = np.full(beta.shape, np.inf)
    at_zero = np.abs(beta) <= _BOUND_TOL
    at_up = beta >= C - _BOUND_TOL
    at_lo = beta <= -C + _BOUND_TOL
    free_pos = (~at_zero) & (~at_up) & (beta > 0)
    free_neg = (~at_zero) & (~at_lo) & (beta < 0)
    lo[at_zero] = F[at_zero] - eps
    hi[at_zero] = F[at_zero] + eps
    lo[free_pos] = F[free_pos] - eps
    hi[free_pos] = F[free_pos] - eps
    lo[free_neg] = F[free_neg] + eps
    hi[free_neg] = F[free_neg] + eps
    hi[at_up & ~free_pos] = F[at_up & ~free_pos] - eps
    lo[at_lo & ~free_neg] = F[at_lo & ~free_neg] + eps
    return lo, hi


def _pair_step(beta, g, K, eps, C, i, j):
    """Best feasible delta for the move beta_i += delta, beta_j -= delta."""
    eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
    d_lo = max(-C - beta[i], beta[j] - C)
    d_hi = min(C - beta[i], beta[j] + C)

    def change(d):
        smooth = 0.5 * eta * d * d + (g[i] - g[j]) * d
        return smooth + eps * (
            abs(beta[i] + d) - abs(beta[i]) + abs(beta[j] - d) - abs(beta[j])
        )

    candidates = {d_lo, d_hi}
    for brk in (-beta[i], beta[j]):
        if d_lo < brk < d_hi:
            candidates.add(brk)
    if eta > 0:
        # region-wise unconstrained minimizers of the piecewise quadratic
        for si in (-1.0, 1.0):
            for sj in (-1.0, 1.0):
                d = -(g[i] - g[j] + eps * (si - sj)) / eta
                if d_lo <= d <= d_hi and np.sign(beta[i] + d) in (si, 0.0) and np.sign(
                    beta[j] - d
                ) in (sj, 0.0):
                    candidates.add(d)
    best_d, best_c = 0.0, 0.0
    for d in candidates:
        c = change(d)
        if c < best_c - 0.0:
            best_d, best_c = d, c
    return best_d, best_c


def _solve_dual(K: np.ndarray, y: np.ndarray, params: SvrParams):
    """Pairwise coordinate descent on the beta dual from beta = 0."""
    n = y.size
    C, eps, tol = params.C, params.epsilon, params.tolerance
    beta = np.zeros(n)
    g = -y.copy()  # gradient of smooth part: K beta - y
    trace = [dual_objective(K, y, beta, eps)]
    residual = np.inf
    for _ in range(params.max_passes):
        F = -g  # y - K beta
        lo, hi = _bias_intervals(beta, F, eps, C)
        i = int(np.argmax(lo))
        j = int(np.argmin(hi))
        residual = lo[i] - hi[j]
        if residual <= tol:
            break
        d, c = _pair_step(beta, g, K, eps, C, i, j)
        if d == 0.0 or c >= 0.0:
            # the max-violating pair is blocked; try the best of all pairs
            # touching i or j before giving up
            moved = False
            for jj in range(n):
                for a, b in ((i, jj), (jj, j)):
                    if a == b:
                        continue
                    d, c = _pair_step(beta, g, K, eps, C, a, b)
                    if c < -1e-15:
                        i, j = a, b
                        moved = True
                        break
                if moved:
                    break
            if not moved:
                break
        beta[i] += d
        beta[j] -= d
        g += d * (K[:, i] - K[:, j])
        trace.append(dual_objective(K, y, beta, eps))

    F = y - K @ beta
    lo, hi = _bias_intervals(beta, F, eps, C)
    residual = float(np.max(lo) - np.min(hi))
    if residual > 10.0 * tol:
        raise ConvergenceError(
            f"dual solver stalled with KKT residual {residual:.3e} "
            f"(tolerance {tol:.1e})",
            residual=residual,
        )

    free = (np.abs(beta) > _BOUND_TOL) & (np.abs(beta) < C - _BOUND_TOL)
    if np.any(free):
        vals = np.where(beta[free] > 0, F[free] - eps, F[free] + eps)
        bias = float(np.mean(vals))
    else:
        bias = float((np.max(lo) + np.min(hi)) / 2.0)
    return beta, bias, max(residual, 0.0), tuple(trace)


def svr_train(times, values, params: SvrParams) -> SvrModel:
    """Train one scalar-input SVR on (time, value) samples.

    Normalizes both axes to zero mean / unit spread, solves the dual, and
    recovers the bias from the tube conditions of the free support vectors
    (midpoint of the feasible interval if none are free).
    """
    t = np.asarray(times, dtype=float)
    y_raw = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape != y_raw.shape:
        raise ValidationError("times and values must be equal-length 1-D sequences")
    if t.size < 2:
        raise ValidationError(f"need >= 2 samples, got {t.size}")
    if np.any(np.diff(t) <= 0):
        raise ValidationError("times must be strictly increasing")

    # input scale is the window's time span: queries one sampling step past
    # the window land close to the data in kernel distance, which keeps the
    # flattest-in-tube solution honest under extrapolation
    t_mean, t_scale = float(t.mean()), float(t[-1] - t[0])
    y_mean, y_scale = float(y_raw.mean()), float(y_raw.std())
    if y_scale == 0.0:
        y_scale = 1.0
    z = (t - t_mean) / t_scale
    y = (y_raw - y_mean) / y_scale

    K = _kernel_matrix(z, params.gamma)
    beta, bias, residual, trace = _solve_dual(K, y, params)
    return SvrModel(
        betas=beta,
        bias=bias,
        inputs=z,
        targets=y,
        params=params,
        input_scaler=(t_mean, t_scale),
        target_scaler=(y_mean, y_scale),
        kkt_residual=residual,
        objective_trace=trace,
    )


def svr_predict(model: SvrModel, t: float) -> float:
    """Evaluate the trained regression function at time t (raw units)."""
    t_mean, t_scale = model.input_scaler
    z = (float(t) - t_mean) / t_scale
    d = model.inputs - z
    k = np.exp(-model.params.gamma * d * d)
    f = float(model.betas @ k) + model.bias
    y_mean, y_scale = model.target_scaler
    return f * y_scale + y_mean


def kkt_gap(model: SvrModel) -> float:
    """Independent KKT residual recomputation from the stored training data."""
    K = _kernel_matrix(model.inputs, model.params.gamma)
    F = model.targets - K @ model.betas
    lo, hi = _bias_intervals(
        model.betas, F, model.params.epsilon, model.params.C
    )
    return float(np.max(lo) - np.min(hi))


def classify_regime(speed_window, thresholds: RegimeThresholds = DEFAULT_THRESHOLDS):
    """Map a recent speed window to one of the four SVR regimes.

    Decision tree over the window's OLS slope m (per sample interval), mean,
    first/last values, checked in fixed order:

      1. mean >= high_speed and |m| <= slope_eps      -> SVR1
      2. last <= stop_speed and m <= slope_eps        -> SVR3
      3. first <= stop_speed and m > slope_eps        -> SVR4
      4. interior minimum (both ends above the min
         by at least slope_eps per sample)            -> SVR2
      fallback                                        -> SVR1

    The stop/start rules run before the interior-minimum test so a dip to a
    genuine halt is never mislabeled as a turn. Rule 2 accepts any
    non-increasing window ending at stop speed, so a fully stationary window
    classifies as SVR3 (parked) rather than falling through to SVR1.
    """
    v = np.asarray(speed_window, dtype=float)
    if v.ndim != 1 or v.size < 3:
        raise ValidationError(f"speed window must have >= 3 values, got {v.size}")
    idx = np.arange(v.size, dtype=float)
    m = float(np.polyfit(idx, v, 1)[0])
    mean = float(v.mean())
    first, last = float(v[0]), float(v[-1])

    if mean >= thresholds.high_speed and abs(m) <= thresholds.slope_eps:
        return RegimeLabel.SVR1
    if last <= thresholds.stop_speed and m <= thresholds.slope_eps:
        return RegimeLabel.SVR3
    if first <= thresholds.stop_speed and m > thresholds.slope_eps:
        return RegimeLabel.SVR4
    k = int(np.argmin(v))
    if 0 < k < v.size - 1:
        vmin = float(v[k])
        if first - vmin >= thresholds.slope_eps and last - vmin >= thresholds.slope_eps:
            return RegimeLabel.SVR2
    return RegimeLabel.SVR1


def svr_predict_position(
    traj: Trajectory,
    at_index: int,
    window_k: int,
    regime_params: dict[RegimeLabel, SvrParams] = DEFAULT_REGIME_PARAMS,
    thresholds: RegimeThresholds = DEFAULT_THRESHOLDS,
    rule: HorizonRule = HorizonRule(),
) -> tuple[float, tuple[float, float], RegimeLabel]:
    """Regime-switched SVR position prediction past ``points[at_index]``.

    Classifies the regime from the window's speeds (derived if the trace
    carries none), trains one model per coordinate with that regime's
    hyperparameters, and evaluates both at the horizon time.
    """
    if window_k < 3:
        raise ValidationError(f"window_k must be >= 3, got {window_k}")
    if at_index < window_k - 1:
        raise InsufficientHistoryError(
            f"need {window_k} history points, have {at_index + 1}"
        )
    if any(p.speed is None for p in traj.points):
        traj = derive_speeds(traj)
    pts = traj.points[at_index - window_k + 1 : at_index + 1]
    regime = classify_regime([p.speed for p in pts], thresholds)
    params = regime_params[regime]
    times = [p.t for p in pts]
    t_h = horizon_time(Sample3(tuple(times[-3:]), (0.0, 0.0, 0.0)), rule)
    mx = svr_train(times, [p.x for p in pts], params)
    my = svr_train(times, [p.y for p in pts], params)
    return t_h, (svr_predict(mx, t_h), svr_predict(my, t_h)), regime
