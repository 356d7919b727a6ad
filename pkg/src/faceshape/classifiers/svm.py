"""Soft-margin SVM trained by sequential minimal optimization, one-vs-one.

Each class pair gets its own binary machine. The SMO solver repeatedly
picks the maximally KKT-violating pair of multipliers and solves the
two-variable subproblem analytically, keeping 0 <= alpha <= C and
sum(alpha * y) = 0 at every step.
"""

import itertools
from typing import NamedTuple

import numpy as np

from ..landmarks import N_CLASSES
from .base import (ClassifierConfig, KIND_SVM_RBF, Prediction, SvmMachine, SvmParams,
                   TrainedModel)

SMO_TOLERANCE = 1e-3          # KKT violation allowed at termination
SMO_MAX_PASSES = 100_000      # pair updates before giving up
_ETA_EPS = 1e-12


def kernel_matrix(cfg: ClassifierConfig, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if cfg.kind == KIND_SVM_RBF:
        sq = (np.einsum("ij,ij->i", A, A)[:, None]
              + np.einsum("ij,ij->i", B, B)[None, :]
              - 2.0 * A @ B.T)
        return np.exp(-cfg.rbf_gamma * np.maximum(sq, 0.0))
    return A @ B.T


class SmoResult(NamedTuple):
    alphas: np.ndarray
    bias: float
    converged: bool


def smo_solve(K: np.ndarray, y: np.ndarray, C: float,
              tol: float = SMO_TOLERANCE, max_passes: int = SMO_MAX_PASSES) -> SmoResult:
    """Solve the dual for one binary machine given its kernel matrix.

    y is +-1. Termination: the largest KKT violation, measured as the gap
    between the most violating pair, is within 2*tol; the bias is placed
    mid-gap so every point then satisfies KKT within tol.
    """
    n = len(y)
    alpha = np.zeros(n)
    yf = y.astype(float)
    F = -yf                      # prediction error without bias, all alphas zero

    converged = False
    for _ in range(max_passes):
        up = ((yf > 0) & (alpha < C)) | ((yf < 0) & (alpha > 0))
        lo = ((yf > 0) & (alpha > 0)) | ((yf < 0) & (alpha < C))
        if not up.any() or not lo.any():
            converged = True
            break
        i_up = np.flatnonzero(up)[np.argmin(F[up])]
        i_lo = np.flatnonzero(lo)[np.argmax(F[lo])]
        if F[i_lo] <= F[i_up] + 2.0 * tol:
            converged = True
            break

        i, j = int(i_lo), int(i_up)
        a_i, a_j = alpha[i], alpha[j]
        s = yf[i] * yf[j]
        if s < 0:
            L, H = max(0.0, a_j - a_i), min(C, C + a_j - a_i)
        else:
            L, H = max(0.0, a_i + a_j - C), min(C, a_i + a_j)
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        delta = F[i] - F[j]                      # > 2*tol by selection
        if eta > _ETA_EPS:
            a_j_new = np.clip(a_j + yf[j] * delta / eta, L, H)
        else:
            # flat direction: the objective is linear along the segment,
            # so the better endpoint wins
            slope = yf[j] * delta
            a_j_new = H if slope > 0 else L
        if a_j_new == a_j:
            break                                # no progress possible
        a_i_new = a_i + s * (a_j - a_j_new)
        a_i_new = min(max(a_i_new, 0.0), C)      # shave rounding residue

        F += yf[i] * (a_i_new - a_i) * K[i] + yf[j] * (a_j_new - a_j) * K[j]
        alpha[i], alpha[j] = a_i_new, a_j_new

    up = ((yf > 0) & (alpha < C)) | ((yf < 0) & (alpha > 0))
    lo = ((yf > 0) & (alpha > 0)) | ((yf < 0) & (alpha < C))
    if up.any() and lo.any():
        bias = -0.5 * (np.min(F[up]) + np.max(F[lo]))
    elif up.any():
        bias = -float(np.min(F[up]))
    else:
        bias = -float(np.max(F[lo]))
    return SmoResult(alpha, float(bias), converged)


def fit(cfg: ClassifierConfig, Z: np.ndarray, y: np.ndarray) -> SvmParams:
    classes = np.unique(y)
    machines = []
    for a, b in itertools.combinations(classes.tolist(), 2):
        mask = (y == a) | (y == b)
        rows = Z[mask]
        y_bin = np.where(y[mask] == a, 1.0, -1.0)
        K = kernel_matrix(cfg, rows, rows)
        result = smo_solve(K, y_bin, cfg.svm_c)
        machines.append(SvmMachine(class_a=int(a), class_b=int(b), vectors=rows,
                                   labels=y_bin, alphas=result.alphas,
                                   bias=result.bias, converged=result.converged))
    return SvmParams(machines=tuple(machines))


def decision_values(model: TrainedModel, machine: SvmMachine, Z: np.ndarray) -> np.ndarray:
    K = kernel_matrix(model.config, Z, machine.vectors)
    return K @ (machine.alphas * machine.labels) + machine.bias


def predict(model: TrainedModel, Z: np.ndarray) -> list[Prediction]:
    p: SvmParams = model.payload
    n = len(Z)
    votes = np.zeros((n, N_CLASSES))
    signed = np.zeros((n, N_CLASSES))
    for m in p.machines:
        d = decision_values(model, m, Z)
        wins_a = d >= 0.0
        votes[wins_a, m.class_a] += 1
        votes[~wins_a, m.class_b] += 1
        signed[:, m.class_a] += d
        signed[:, m.class_b] -= d

    out = []
    for k in range(n):
        # vote ties break on summed signed decision values, then lowest code
        order = sorted(range(N_CLASSES),
                       key=lambda c: (-votes[k, c], -signed[k, c], c))
        from ..landmarks import FaceShape
        out.append(Prediction(FaceShape(order[0]), votes[k].copy()))
    return out
