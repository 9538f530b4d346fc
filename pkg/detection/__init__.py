"""Probability-of-detection models and the binary measurement likelihood."""
import numpy as np

from detection.base_model import DetectionModel, ModelKind, as_points
from detection.friis_model import FriisModel, FriisParams, FriisProfile, friis_received_power, q_function
from detection.range_model import (
    CallableProfile,
    ConstantProfile,
    ExponentialProfile,
    RangeModel,
    RangeProfile,
)
from detection.registry import FriisSpec, ModelSpec, RangeSpec, TabulatedSpec, build_model
from detection.tabulated_model import TabulatedModel, TabulatedProfile


def detection_probability(s, x, m: DetectionModel) -> np.ndarray:
    """ℓ(s, x) under model `m`."""
    return m.detection_probability(s, x)


def likelihood(d, s, x, m: DetectionModel) -> np.ndarray:
    """g(d | s; x) under model `m`."""
    return m.likelihood(d, s, x)


def sample_measurement(rng: np.random.Generator, s, x, m: DetectionModel) -> np.ndarray:
    """Binary reading(s) drawn with success probability ℓ(s, x)."""
    return m.sample_measurement(rng, s, x)


__all__ = [
    "CallableProfile",
    "ConstantProfile",
    "DetectionModel",
    "ExponentialProfile",
    "FriisModel",
    "FriisParams",
    "FriisProfile",
    "FriisSpec",
    "ModelKind",
    "ModelSpec",
    "RangeModel",
    "RangeProfile",
    "RangeSpec",
    "TabulatedModel",
    "TabulatedProfile",
    "TabulatedSpec",
    "as_points",
    "build_model",
    "detection_probability",
    "friis_received_power",
    "likelihood",
    "q_function",
    "sample_measurement",
]
