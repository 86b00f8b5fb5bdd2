"""Segmentation scoring and single-cell measurement toolkit."""

from ._core import (
    __version__,
    apply_threshold,
    compute_threshold,
    evaluate_masks,
    label_components,
    measure_cells,
    pad_to_multiple,
    pixel_bce,
    pixel_jaccard_loss,
    to_8bit,
)

__all__ = [
    "__version__",
    "apply_threshold",
    "compute_threshold",
    "evaluate_masks",
    "label_components",
    "measure_cells",
    "pad_to_multiple",
    "pixel_bce",
    "pixel_jaccard_loss",
    "to_8bit",
]
