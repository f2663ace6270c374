"""Phrase mining over contextual token embeddings."""

from ._core import (
    Error,
    BestSpan,
    LossOutput,
    SliceGradient,
    ToyEncoder,
    Williams,
    best_span,
    bm25_scores,
    enumerate_spans,
    mean_pool,
    pearson,
    run_cli,
    slice_forward,
    slice_gradient,
    softplus,
    span_count,
    spearman,
    synth_generate,
    tokenize,
    williams_test,
)

__all__ = [
    "Error",
    "BestSpan",
    "LossOutput",
    "SliceGradient",
    "ToyEncoder",
    "Williams",
    "best_span",
    "bm25_scores",
    "enumerate_spans",
    "mean_pool",
    "pearson",
    "run_cli",
    "slice_forward",
    "slice_gradient",
    "softplus",
    "span_count",
    "spearman",
    "synth_generate",
    "tokenize",
    "williams_test",
]
