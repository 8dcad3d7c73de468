"""Deterministic CPU residual net: training, freezing, evaluation, heatmaps."""

from .checkpoint import load_checkpoint, save_checkpoint
from .estimator import ResidualNetClassifier
from .gradcam import default_target_unit, gradcam
from .layers import cross_entropy, log_softmax, softmax
from .metrics import confidence, evaluate, predict_batch
from .network import ForwardCache, backward, forward
from .optim import adam_step
from .pipeline import INDEX_TO_LABEL, LABEL_TO_INDEX, batch_from_images, image_to_tensor
from .spec import ModelSpec, TrainConfig
from .state import ModelState, freeze, init_state, param_names
from .train import train_run

__all__ = [
    "ForwardCache",
    "INDEX_TO_LABEL",
    "LABEL_TO_INDEX",
    "ModelSpec",
    "ModelState",
    "ResidualNetClassifier",
    "TrainConfig",
    "adam_step",
    "backward",
    "batch_from_images",
    "confidence",
    "cross_entropy",
    "default_target_unit",
    "evaluate",
    "forward",
    "freeze",
    "gradcam",
    "image_to_tensor",
    "init_state",
    "load_checkpoint",
    "log_softmax",
    "param_names",
    "predict_batch",
    "save_checkpoint",
    "softmax",
    "train_run",
]
