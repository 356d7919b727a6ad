"""Shared classifier contract: config, trained-model container, prediction."""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..errors import InvalidInput
from ..features import N_FEATURES, NormalizationStats, apply_normalizer, fit_normalizer
from ..landmarks import N_CLASSES, FaceShape

KIND_LDA = "lda"
KIND_SVM_LIN = "svm-lin"
KIND_SVM_RBF = "svm-rbf"
KIND_MLP = "mlp"
KIND_KNN = "knn"
KINDS = (KIND_LDA, KIND_SVM_LIN, KIND_SVM_RBF, KIND_MLP, KIND_KNN)

# Row labels used in benchmark tables.
DISPLAY_NAMES = {
    KIND_LDA: "LDA",
    KIND_SVM_LIN: "SVM-LIN",
    KIND_SVM_RBF: "SVM-RBF",
    KIND_MLP: "MLP",
    KIND_KNN: "KNN",
}


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str
    svm_c: float = 0.01
    rbf_gamma: float = 1.0 / N_FEATURES
    knn_k: int = 5
    lda_components: int = 2
    mlp_hidden: tuple[int, ...] = (5, 2)
    mlp_l2: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).lower())
        object.__setattr__(self, "mlp_hidden", tuple(int(h) for h in self.mlp_hidden))
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown classifier kind {self.kind!r}; expected one of {KINDS}")
        if self.svm_c <= 0 or self.rbf_gamma <= 0:
            raise InvalidInput("svm_c and rbf_gamma must be > 0")
        if self.knn_k < 1 or self.lda_components < 1:
            raise InvalidInput("knn_k and lda_components must be >= 1")
        if self.mlp_l2 < 0:
            raise InvalidInput("mlp_l2 must be >= 0")
        if any(h < 1 for h in self.mlp_hidden):
            raise InvalidInput("mlp_hidden sizes must be >= 1")


@dataclass(frozen=True)
class KnnParams:
    train_x: np.ndarray          # normalized training matrix, stored verbatim
    train_y: np.ndarray          # int labels, training order preserved


@dataclass(frozen=True)
class LdaParams:
    classes: np.ndarray          # present class codes, ascending
    projection: np.ndarray       # (n_features, components)
    centroids: np.ndarray        # (len(classes), components), projected class means


@dataclass(frozen=True)
class SvmMachine:
    class_a: int                 # +1 side (lower class code)
    class_b: int                 # -1 side
    vectors: np.ndarray          # the pair's training rows (all retained)
    labels: np.ndarray           # +-1 per row
    alphas: np.ndarray           # dual coefficients, 0 <= alpha <= C
    bias: float
    converged: bool


@dataclass(frozen=True)
class SvmParams:
    machines: tuple[SvmMachine, ...]     # one-vs-one, pairs in ascending order


@dataclass(frozen=True)
class MlpParams:
    layer_sizes: tuple[int, ...]         # input, hidden..., output
    params: np.ndarray                   # flat weight/bias vector


Payload = Union[KnnParams, LdaParams, SvmParams, MlpParams]


@dataclass(frozen=True)
class TrainedModel:
    config: ClassifierConfig
    norm: NormalizationStats
    payload: Payload

    @property
    def training_converged(self) -> bool:
        if isinstance(self.payload, SvmParams):
            return all(m.converged for m in self.payload.machines)
        return True


@dataclass(frozen=True)
class Prediction:
    label: FaceShape
    scores: np.ndarray           # one score per class, length 5


def label_from_scores(scores: np.ndarray) -> FaceShape:
    """Argmax over class scores; ties resolve to the lowest class code."""
    return FaceShape(int(np.argmax(scores)))


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != N_FEATURES:
        raise InvalidInput(f"expected feature rows of length {N_FEATURES}, got shape {X.shape}")
    return X


def _as_labels(y) -> np.ndarray:
    return np.array([int(v) for v in y], dtype=int)


def train(cfg: ClassifierConfig, X, y) -> TrainedModel:
    """Fit a classifier of cfg.kind on feature rows X with labels y.

    Normalization stats are fit on X and embedded in the returned model;
    all kinds train on the normalized data.
    """
    from . import knn, lda, mlp, svm

    X = _as_matrix(X)
    y = _as_labels(y)
    if len(X) != len(y):
        raise InvalidInput(f"{len(X)} feature rows but {len(y)} labels")
    if len(X) < 2:
        raise InvalidInput("need at least 2 training samples")
    if len(np.unique(y)) < 2:
        raise InvalidInput("single class")
    if not np.isfinite(X).all():
        raise InvalidInput("non-finite feature value in training data")

    norm = fit_normalizer(X)
    Z = apply_normalizer(norm, X)

    if cfg.kind == KIND_KNN:
        payload = knn.fit(cfg, Z, y)
    elif cfg.kind == KIND_LDA:
        payload = lda.fit(cfg, Z, y)
    elif cfg.kind in (KIND_SVM_LIN, KIND_SVM_RBF):
        payload = svm.fit(cfg, Z, y)
    else:
        payload = mlp.fit(cfg, Z, y)
    return TrainedModel(cfg, norm, payload)


def predict_batch(model: TrainedModel, X) -> list[Prediction]:
    """Predict a batch of feature rows; one Prediction per row."""
    from . import knn, lda, mlp, svm

    X = _as_matrix(X)
    if not np.isfinite(X).all():
        raise InvalidInput("non-finite feature value in prediction input")
    Z = apply_normalizer(model.norm, X)

    kind = model.config.kind
    if kind == KIND_KNN:
        return knn.predict(model, Z)
    if kind == KIND_LDA:
        return lda.predict(model, Z)
    if kind in (KIND_SVM_LIN, KIND_SVM_RBF):
        return svm.predict(model, Z)
    return mlp.predict(model, Z)


def predict(model: TrainedModel, x) -> Prediction:
    """Predict a single feature vector."""
    return predict_batch(model, np.asarray(x, dtype=float).reshape(1, -1))[0]
