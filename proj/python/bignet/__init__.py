"""Brand identification on vector graphics.

Thin Python layer over the C++ core: synthesis, tracing, graph construction,
training, evaluation and attribution.
"""

from ._bignet import (
    BignetError,
    ConstructionError,
    ContractError,
    DegenerateImageError,
    InfeasibleRulesetError,
    IoError,
    LoadError,
    Model,
    ModelConfig,
    NumericError,
    ParseError,
    SplitError,
    UnsupportedFeatureError,
    build_graph,
    confusion,
    evaluate,
    generate_dataset,
    kappa_matrix,
    normalize_svg,
    pca2,
    render_attribution,
    sample_phone,
    split,
    trace_pbm,
    train,
)

__all__ = [
    "BignetError",
    "ConstructionError",
    "ContractError",
    "DegenerateImageError",
    "InfeasibleRulesetError",
    "IoError",
    "LoadError",
    "Model",
    "ModelConfig",
    "NumericError",
    "ParseError",
    "SplitError",
    "UnsupportedFeatureError",
    "build_graph",
    "confusion",
    "evaluate",
    "generate_dataset",
    "kappa_matrix",
    "normalize_svg",
    "pca2",
    "render_attribution",
    "sample_phone",
    "split",
    "trace_pbm",
    "train",
]
