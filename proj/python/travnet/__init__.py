"""Traversability estimation: section scores, safety loss, synthetic scenes."""

import json

from ._core import (  # noqa: F401
    ConfigError,
    DataError,
    Predictor,
    angular_difference,
    clamp_scores,
    domain_bce_loss,
    linear_displacement,
    linear_velocity,
    load_image,
    mse_loss,
    safety_loss,
    save_image,
    select_frames,
    split_sections,
    steering_target,
    synth_scene,
)
from ._core import compute_report as _compute_report


def compute_report(predictions, ground_truth, domains):
    """MAE and safety statistics as a dict."""
    return json.loads(_compute_report(predictions, ground_truth, domains))
