"""Linear discriminant analysis: scatter-based projection, nearest-centroid rule."""

import numpy as np
import scipy.linalg

from ..landmarks import N_CLASSES
from .base import ClassifierConfig, LdaParams, Prediction, TrainedModel, label_from_scores

_RIDGE = 1e-6       # relative ridge keeping the within-class scatter invertible


def fit(cfg: ClassifierConfig, Z: np.ndarray, y: np.ndarray) -> LdaParams:
    n, d = Z.shape
    classes = np.unique(y)
    overall = Z.mean(axis=0)

    s_w = np.zeros((d, d))
    s_b = np.zeros((d, d))
    for c in classes:
        zc = Z[y == c]
        mu = zc.mean(axis=0)
        centered = zc - mu
        s_w += centered.T @ centered
        diff = (mu - overall).reshape(-1, 1)
        s_b += len(zc) * (diff @ diff.T)

    s_w_reg = s_w + _RIDGE * np.trace(s_w) / d * np.eye(d)
    # generalized symmetric eigenproblem; eigenvalues ascending
    eigvals, eigvecs = scipy.linalg.eigh(s_b, s_w_reg)
    projection = eigvecs[:, ::-1][:, :cfg.lda_components]

    centroids = np.vstack([Z[y == c].mean(axis=0) @ projection for c in classes])
    return LdaParams(classes=classes, projection=projection, centroids=centroids)


def predict(model: TrainedModel, Z: np.ndarray) -> list[Prediction]:
    p: LdaParams = model.payload
    projected = Z @ p.projection
    out = []
    for row in projected:
        dists = np.linalg.norm(p.centroids - row, axis=1)
        scores = np.full(N_CLASSES, -np.inf)
        scores[p.classes] = -dists
        out.append(Prediction(label_from_scores(scores), scores))
    return out
