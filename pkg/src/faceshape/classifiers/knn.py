"""K-nearest-neighbors on normalized features, brute-force Euclidean."""

import numpy as np

from ..errors import InvalidInput
from ..landmarks import N_CLASSES
from .base import ClassifierConfig, KnnParams, Prediction, TrainedModel, label_from_scores


def fit(cfg: ClassifierConfig, Z: np.ndarray, y: np.ndarray) -> KnnParams:
    if len(Z) < cfg.knn_k:
        raise InvalidInput(f"knn_k={cfg.knn_k} exceeds training-set size {len(Z)}")
    return KnnParams(train_x=Z.copy(), train_y=y.copy())


def predict(model: TrainedModel, Z: np.ndarray) -> list[Prediction]:
    p: KnnParams = model.payload
    k = model.config.knn_k
    out = []
    for q in Z:
        d2 = np.einsum("ij,ij->i", p.train_x - q, p.train_x - q)
        # stable sort: equal distances keep training order (earlier samples win)
        neighbors = np.argsort(d2, kind="stable")[:k]
        scores = np.bincount(p.train_y[neighbors], minlength=N_CLASSES).astype(float)
        out.append(Prediction(label_from_scores(scores), scores))
    return out
