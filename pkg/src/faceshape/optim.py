"""Limited-memory BFGS minimizer with a strong-Wolfe line search.

The inverse Hessian is approximated by the standard two-loop recursion over
the most recent (step, gradient-change) pairs; steps are accepted only when
they satisfy both strong Wolfe conditions, found by bracketing plus cubic
interpolation.
"""

import enum
from collections import deque
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import NumericalFailure

_CURVATURE_EPS = 1e-10        # discard pairs with s.y below this
_MAX_STEP = 1e10


class ObjectiveEvaluation(NamedTuple):
    value: float
    gradient: np.ndarray


@dataclass(frozen=True)
class LbfgsConfig:
    memory: int = 10
    max_iters: int = 200
    grad_tol: float = 1e-5            # infinity norm of the gradient
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    max_line_search_steps: int = 40

    def __post_init__(self):
        if self.memory < 1 or self.max_iters < 1 or self.max_line_search_steps < 1:
            raise ValueError("memory, max_iters, max_line_search_steps must be >= 1")
        if not 0 < self.wolfe_c1 < self.wolfe_c2 < 1:
            raise ValueError("need 0 < wolfe_c1 < wolfe_c2 < 1")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be > 0")


class Status(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max-iters"
    LINE_SEARCH_FAILED = "line-search-failed"


class MinimizeResult(NamedTuple):
    x: np.ndarray
    value: float
    status: Status


def _evaluate(objective, x) -> tuple[float, np.ndarray]:
    out = objective(x)
    value, grad = float(out[0]), np.asarray(out[1], dtype=float)
    if grad.shape != x.shape:
        raise NumericalFailure(f"gradient shape {grad.shape} != parameter shape {x.shape}")
    if not np.isfinite(value) or not np.isfinite(grad).all():
        raise NumericalFailure("objective returned a non-finite value or gradient")
    return value, grad


def _two_loop(grad, pairs, gamma):
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * s.dot(q)
        alphas.append(a)
        q -= a * y
    q *= gamma
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * y.dot(q)
        q += (a - b) * s
    return q


def _cubic_min(a0, f0, g0, a1, f1, g1):
    # Minimizer of the cubic Hermite interpolant; NaN when ill-conditioned.
    d1 = g0 + g1 - 3.0 * (f0 - f1) / (a0 - a1)
    disc = d1 * d1 - g0 * g1
    if disc < 0.0:
        return float("nan")
    d2 = np.copysign(np.sqrt(disc), a1 - a0)
    denom = g1 - g0 + 2.0 * d2
    if denom == 0.0:
        return float("nan")
    return a1 - (a1 - a0) * (g1 + d2 - d1) / denom


class _LineSearchFailure(Exception):
    pass


def _wolfe_line_search(evaluate, x, f0, g0, p, cfg):
    """Return (alpha, x_new, f_new, g_new) satisfying both strong Wolfe conditions."""
    dphi0 = float(g0.dot(p))
    if dphi0 >= 0.0:
        raise _LineSearchFailure("not a descent direction")
    c1, c2 = cfg.wolfe_c1, cfg.wolfe_c2
    budget = cfg.max_line_search_steps

    cache = {}

    def phi(alpha):
        nonlocal budget
        if alpha not in cache:
            if budget <= 0:
                raise _LineSearchFailure("evaluation budget exhausted")
            budget -= 1
            xa = x + alpha * p
            fa, ga = evaluate(xa)
            cache[alpha] = (fa, float(ga.dot(p)), xa, ga)
        return cache[alpha]

    def zoom(a_lo, a_hi):
        while True:
            f_lo, d_lo, _, _ = phi(a_lo)
            f_hi, d_hi, _, _ = phi(a_hi)
            a_j = _cubic_min(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi)
            lo, hi = min(a_lo, a_hi), max(a_lo, a_hi)
            width = hi - lo
            if not np.isfinite(a_j) or a_j < lo + 0.1 * width or a_j > hi - 0.1 * width:
                a_j = 0.5 * (lo + hi)       # safeguarded bisection
            f_j, d_j, x_j, g_j = phi(a_j)
            if f_j > f0 + c1 * a_j * dphi0 or f_j >= f_lo:
                a_hi = a_j
            else:
                if abs(d_j) <= -c2 * dphi0:
                    return a_j, x_j, f_j, g_j
                if d_j * (a_hi - a_lo) >= 0.0:
                    a_hi = a_lo
                a_lo = a_j
            if width <= 1e-16 * max(1.0, abs(a_lo)):
                raise _LineSearchFailure("zoom interval collapsed")

    a_prev, f_prev = 0.0, f0
    alpha = 1.0
    first = True
    while True:
        f_a, d_a, x_a, g_a = phi(alpha)
        if f_a > f0 + c1 * alpha * dphi0 or (not first and f_a >= f_prev):
            return zoom(a_prev, alpha)
        if abs(d_a) <= -c2 * dphi0:
            return alpha, x_a, f_a, g_a
        if d_a >= 0.0:
            return zoom(alpha, a_prev)
        a_prev, f_prev = alpha, f_a
        alpha = min(2.0 * alpha, _MAX_STEP)
        first = False


def minimize(objective: Callable, x0, cfg: LbfgsConfig = LbfgsConfig(),
             callback: Callable | None = None) -> MinimizeResult:
    """Minimize `objective` from `x0`.

    `objective` maps a parameter vector to (value, gradient); `callback`,
    when given, is invoked with (x, value, gradient) at every accepted
    iterate. Raises NumericalFailure on non-finite values or gradients.
    """
    x = np.array(x0, dtype=float).ravel()

    def evaluate(xk):
        return _evaluate(objective, xk)

    f, g = evaluate(x)
    pairs = deque(maxlen=cfg.memory)
    gamma = 1.0

    for _ in range(cfg.max_iters):
        if np.max(np.abs(g)) <= cfg.grad_tol:
            return MinimizeResult(x, f, Status.CONVERGED)
        p = -_two_loop(g, pairs, gamma)
        if g.dot(p) >= 0.0:
            # stale curvature made the direction non-descent; restart from
            # steepest descent
            pairs.clear()
            gamma = 1.0
            p = -g
        try:
            alpha, x_new, f_new, g_new = _wolfe_line_search(evaluate, x, f, g, p, cfg)
        except _LineSearchFailure:
            return MinimizeResult(x, f, Status.LINE_SEARCH_FAILED)
        s = alpha * p
        y = g_new - g
        sy = float(s.dot(y))
        if sy > _CURVATURE_EPS:
            pairs.append((s, y, 1.0 / sy))
            gamma = sy / float(y.dot(y))
        x, f, g = x_new, f_new, g_new
        if callback is not None:
            callback(x, f, g)

    status = Status.CONVERGED if np.max(np.abs(g)) <= cfg.grad_tol else Status.MAX_ITERS
    return MinimizeResult(x, f, status)
