"""Concept-level attribution for image classifiers.

Pipeline: ingest externally produced concept masks, optionally distill the
classifier into a per-input surrogate that reuses its final FC layer, estimate
per-concept attribution values by exact enumeration or Monte-Carlo coalition
sampling, then emit a selected concept subset, a rendered explanation, and
insertion/deletion faithfulness metrics.
"""

from .bundle import (
    GridMeanBackbone,
    ModelBundle,
    PreprocessSpec,
    builtin_toy_model,
    features,
    load_bundle,
    logits,
    predict,
    preprocess_image,
    save_bundle,
    softmax,
)
from .coalition import Coalition
from .concepts import (
    ConceptMask,
    ConceptSet,
    complete_with_background,
    concept_set_to_manifest,
    decode_rle,
    encode_rle,
    load_concepts,
)
from .curves import Curve, auc, deletion_curve, insertion_curve
from .errors import (
    BackendFailure,
    CoalitionSizeMismatch,
    ConceptAlreadyInCoalition,
    DimensionMismatch,
    EacError,
    EmptyConceptSet,
    IoFailure,
    MalformedManifest,
    MissingArtifact,
    NegativeRun,
    NonFiniteLoss,
    ProbeFailure,
    RleLengthMismatch,
    ShapeMismatch,
    TooManyConcepts,
)
from .explain import (
    Explanation,
    rank_concepts,
    read_report,
    render_explanation,
    report_dict,
    select_explanation,
    write_report,
)
from .masking import (
    BaselineFill,
    apply_coalition,
    fill_image,
    utility_direct,
    visible_pixels,
)
from .pipeline import (
    EvalResult,
    RunConfig,
    RunResult,
    resolve_target,
    run_eval,
    run_explain,
    run_pie_fit,
)
from .rand import Xorshift64Star, probe_image
from .shapley import (
    DirectUtility,
    ShapleyResult,
    SurrogateUtility,
    TableGame,
    UtilityFn,
    exact_shapley,
    marginal_contribution,
    mc_shapley,
)
from .surrogate import (
    FidelityReport,
    PieConfig,
    Surrogate,
    TrainReport,
    TrainSample,
    fidelity,
    sample_dataset,
    surrogate_predict,
    surrogate_predict_batch,
    train_surrogate,
)
from .synth import (
    concept_set_from_bitmaps,
    random_game_table,
    random_scene,
    rect_mask,
    three_rects,
)

__version__ = "0.1.0"

__all__ = [
    "BackendFailure",
    "BaselineFill",
    "Coalition",
    "CoalitionSizeMismatch",
    "ConceptAlreadyInCoalition",
    "ConceptMask",
    "ConceptSet",
    "Curve",
    "DimensionMismatch",
    "DirectUtility",
    "EacError",
    "EmptyConceptSet",
    "EvalResult",
    "Explanation",
    "FidelityReport",
    "GridMeanBackbone",
    "IoFailure",
    "MalformedManifest",
    "MissingArtifact",
    "ModelBundle",
    "NegativeRun",
    "NonFiniteLoss",
    "PieConfig",
    "PreprocessSpec",
    "ProbeFailure",
    "RleLengthMismatch",
    "RunConfig",
    "RunResult",
    "ShapeMismatch",
    "ShapleyResult",
    "Surrogate",
    "SurrogateUtility",
    "TableGame",
    "TooManyConcepts",
    "TrainReport",
    "TrainSample",
    "UtilityFn",
    "Xorshift64Star",
    "apply_coalition",
    "auc",
    "builtin_toy_model",
    "complete_with_background",
    "concept_set_from_bitmaps",
    "concept_set_to_manifest",
    "decode_rle",
    "deletion_curve",
    "encode_rle",
    "exact_shapley",
    "features",
    "fidelity",
    "fill_image",
    "insertion_curve",
    "load_bundle",
    "load_concepts",
    "logits",
    "marginal_contribution",
    "mc_shapley",
    "predict",
    "preprocess_image",
    "probe_image",
    "random_game_table",
    "random_scene",
    "rank_concepts",
    "read_report",
    "rect_mask",
    "render_explanation",
    "report_dict",
    "resolve_target",
    "run_eval",
    "run_explain",
    "run_pie_fit",
    "sample_dataset",
    "save_bundle",
    "select_explanation",
    "softmax",
    "surrogate_predict",
    "surrogate_predict_batch",
    "three_rects",
    "train_surrogate",
    "utility_direct",
    "visible_pixels",
    "write_report",
]
