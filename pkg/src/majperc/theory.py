"""Closed-form and numeric theory: binomial tails, critical probabilities,
and the dissemination parameter window.

All computations are 64-bit floating point with the tolerances stated per
function; no arbitrary precision.  Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

__all__ = [
    "binom_lower_tail",
    "binom_half_tail",
    "CriticalProbability",
    "critical_probability",
    "wheel_critical_probability",
    "ParameterWindow",
    "parameter_window",
    "parameter_window_log",
    "non_dissemination_degree_bounds",
]


def binom_lower_tail(d: int, cutoff: int, y) -> float | np.ndarray:
    """Pr[Bin(d, y) <= cutoff], summed exactly in log space.

    Each term exp(log C(d,i) + i log y + (d-i) log(1-y)) is accumulated via
    log-sum-exp, so the result is accurate (absolute error well under 1e-12
    for d <= 500) even when individual terms underflow.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    scalar = np.ndim(y) == 0
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    if ((ya < 0) | (ya > 1)).any():
        raise ValueError("y must be in [0, 1]")
    if cutoff >= d:
        out = np.ones_like(ya)
    elif cutoff < 0:
        out = np.zeros_like(ya)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = _tail_from_logs(d, cutoff, np.log(ya), np.log1p(-ya))
        out = np.where(ya == 0.0, 1.0, out)
        out = np.where(ya == 1.0, 0.0, out)
    return float(out[0]) if scalar else out


def _tail_from_logs(d: int, cutoff: int, log_y: np.ndarray,
                    log_1my: np.ndarray) -> np.ndarray:
    """Tail sum given precomputed log(y), log(1-y); the split lets callers
    avoid the cancellation in forming 1-y when y is within 1e-9 of 0 or 1."""
    i = np.arange(0, cutoff + 1)
    logc = gammaln(d + 1) - gammaln(i + 1) - gammaln(d - i + 1)
    terms = logc[:, None] + i[:, None] * log_y[None, :] \
        + (d - i)[:, None] * log_1my[None, :]
    return np.exp(logsumexp(terms, axis=0))


def binom_half_tail(d: int, y) -> float | np.ndarray:
    """Pr[Bin(d, y) <= floor(d/2)]: at most half the trials succeed."""
    return binom_lower_tail(d, d // 2, y)


def _survival_tail(d: int, y: np.ndarray) -> np.ndarray:
    """Pr[Bin(d-1, 1-y) <= ceil((d-1)/2)] without forming 1-y explicitly.

    This is the probability that a degree-d vertex keeps enough non-helping
    neighbours under the strict-majority rule: activation needs
    ceil((d+1)/2) active neighbours, so survival tolerates up to
    ceil((d-1)/2) active ones among the other d-1.  For odd d the cutoff
    equals floor((d-1)/2) and matches the at-most-half tail; for even d the
    correct cutoff is one above the floor.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        return _tail_from_logs(d - 1, (d - 1 + 1) // 2, np.log1p(-y), np.log(y))


def _objective(d: int, y) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    with np.errstate(divide="ignore", over="ignore"):
        return y / _survival_tail(d, y)


@dataclass
class CriticalProbability:
    """Critical probability of strict-majority dynamics on random d-regular
    graphs: 1 minus the infimum over y in (0,1) of y / survival_tail(y).

    ``argmin_y`` locates the infimum found numerically; when the infimum is
    approached at the boundary y -> 0 (degrees 3 and 4) there is no interior
    stationary point and ``stationary_y`` is None.
    """

    d: int
    value: float
    argmin_y: float
    objective_min: float
    stationary_y: float | None
    tolerance: float

    def __float__(self):
        return self.value


def critical_probability(d: int, grid: int = 10**4,
                         tol: float = 1e-9) -> CriticalProbability:
    """Numeric infimum by dense grid scan refined with golden-section.

    The grid covers (0, 1) with ``grid`` interior points; the bracket around
    the best grid point is refined to width ``tol``.  When the best grid
    point is the leftmost one the bracket is opened down to 1e-15 so a
    boundary infimum is resolved to the same tolerance.
    """
    if d < 3:
        raise ValueError("defined for degree d >= 3")
    ys = np.arange(1, grid + 1) / (grid + 1.0)
    vals = _objective(d, ys)
    i = int(np.argmin(vals))
    lo = float(ys[i - 1]) if i > 0 else 1e-15
    hi = float(ys[i + 1]) if i < grid - 1 else 1.0 - 1e-15
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    e = a + inv_phi * (b - a)
    fc = float(_objective(d, c)[0])
    fe = float(_objective(d, e)[0])
    while b - a > tol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - inv_phi * (b - a)
            fc = float(_objective(d, c)[0])
        else:
            a, c, fc = c, e, fe
            e = a + inv_phi * (b - a)
            fe = float(_objective(d, e)[0])
    ystar = (a + b) / 2.0
    fstar = float(_objective(d, ystar)[0])
    if fstar <= vals[i]:
        best_y, best = ystar, fstar
    else:
        best_y, best = float(ys[i]), float(vals[i])
    interior = i > 0
    return CriticalProbability(
        d=d,
        value=1.0 - best,
        argmin_y=best_y,
        objective_min=best,
        stationary_y=best_y if interior else None,
        tolerance=tol,
    )


def wheel_critical_probability(tol: float = 1e-12) -> float:
    """Root in [0, 1] of x + x^2 - x^3 = 1/2 (wheel-graph threshold).

    The map is strictly increasing on [0, 1] (derivative 1 + 2x - 3x^2 > 0
    there), so bisection finds the unique root.
    """
    f = lambda x: x + x * x - x ** 3 - 0.5
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


@dataclass
class ParameterWindow:
    """Feasible (p, k, r) region for guaranteed dissemination at torus side n.

    p_min = 200 (log log n)^{2/3} / (log n)^{1/3}; at the working density p,
    k must lie in [k_min, k_max] with k_min = ceil((1000/p) log(1/p)) and
    k_max = floor(p^2 log n / (3000 log(1/p))), and r in [1, floor(p*k/20)].
    The window is reported honestly: it is empty at every desk-scale n (the
    required p_min exceeds 1 until n is astronomically large).  The derived
    per-run constants use m = ceil(8/p), t = 100 k^3, eps = k^-100 at
    k = k_min, and the large-n schedule sets r = floor(400 log log n).
    """

    n: int
    p: float
    p_min: float
    p_max: float
    k_min: int | None
    k_max: int | None
    r_max: int | None
    nonempty: bool
    schedule_r: int
    m: int | None = None
    t: int | None = None
    log_eps: float | None = None

    def to_json_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "n", "p", "p_min", "p_max", "k_min", "k_max", "r_max",
            "nonempty", "schedule_r", "m", "t", "log_eps")}


def parameter_window(n: int, p0: float, p: float | None = None) -> ParameterWindow:
    """Evaluate the dissemination window at torus side n and ceiling p0.

    ``p`` defaults to p_min (the smallest admissible density).  All the
    inequalities are checked as stated; ``nonempty`` is True only when the
    density range, the k range, and r >= 1 are simultaneously satisfiable.
    """
    if n < 16:
        raise ValueError("need n >= 16 so that log log n > 0")
    return parameter_window_log(math.log(n), p0, p, n=n)


def parameter_window_log(log_n: float, p0: float, p: float | None = None,
                         n: int = 0) -> ParameterWindow:
    """Same as parameter_window but driven by log(n) directly, so the
    asymptotic regime where the window is nonempty can be explored even
    though such n are far beyond integer range."""
    if not 0 < p0 <= 1:
        raise ValueError("p0 must be in (0, 1]")
    if log_n <= 1.0:
        raise ValueError("need log(n) > 1 so that log log n > 0")
    ln = log_n
    lln = math.log(ln)
    p_min = 200.0 * lln ** (2.0 / 3.0) / ln ** (1.0 / 3.0)
    if p is None:
        p = p_min
    schedule_r = math.floor(400.0 * lln)
    if not 0 < p <= 1:
        return ParameterWindow(n=n, p=p, p_min=p_min, p_max=p0, k_min=None,
                               k_max=None, r_max=None, nonempty=False,
                               schedule_r=schedule_r)
    log1p_inv = math.log(1.0 / p)
    k_min = math.ceil(1000.0 / p * log1p_inv) if p < 1 else 1
    k_max = math.floor(p * p * ln / (3000.0 * log1p_inv)) if p < 1 else 0
    r_max = math.floor(p * k_min / 20.0)
    nonempty = (p_min <= p <= p0) and k_min <= k_max and r_max >= 1
    return ParameterWindow(
        n=n, p=p, p_min=p_min, p_max=p0,
        k_min=k_min, k_max=k_max, r_max=r_max, nonempty=nonempty,
        schedule_r=schedule_r,
        m=math.ceil(8.0 / p),
        t=100 * k_min ** 3,
        log_eps=-100.0 * math.log(k_min) if k_min >= 1 else None,
    )


def non_dissemination_degree_bounds(p: float) -> tuple[float, float]:
    """Degree thresholds below which strict-majority dissemination fails on
    any growing sequence of d-regular graphs: d < 1/p for odd d, d < 2/p
    for even d.  Used to pick guaranteed-non-disseminating baselines."""
    if not 0 < p <= 1:
        raise ValueError("p must be in (0, 1]")
    return 1.0 / p, 2.0 / p
