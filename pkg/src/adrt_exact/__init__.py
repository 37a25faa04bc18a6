"""Approximate discrete Radon transform with an exact fast inverse."""

from .core import (
    AdrtError,
    AdrtIndexError,
    CostLedger,
    DimensionError,
    Image,
    IngestError,
    Quadrant,
    SectionedTransform,
    StructuralError,
    apply_quadrant_symmetry,
    image_from_values,
    invert_quadrant_symmetry,
    section_view,
)
from .dlines import DigitalLine, adrt_direct, adrt_direct_full, digital_line
from .forward import adrt_full, adrt_init, adrt_single_quadrant, forward_cost, merge_level
from .inverse import (
    DeltaBuffer,
    compute_deltas,
    iadrt,
    iadrt_from_full,
    inverse_cost,
    level_bound_cost,
    prefix_restore,
    split_level,
)

__version__ = "0.1.0"
