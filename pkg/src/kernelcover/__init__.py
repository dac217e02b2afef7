"""Covers, cover-samples and lower-bound witnesses for kernel range spaces."""

__version__ = "0.1.0"

from .covering import Cover, CoverTooLargeError, ball_net, far_point, naive_cover
from .kernels import KernelSpec, critical_radius, eval_kernel, lipschitz, semi_level_member
from .lowerbound import (
    SphereSystem,
    combinatorial_bound,
    hamming_count,
    packing_certificate,
    sphere_intersection,
    veronese_lift,
    witness_grid,
)
from .oracle import (
    VerificationReport,
    empirical_rademacher,
    shatter_search_1d,
    verify_cover,
    verify_cover_sample,
    verify_kde_sample,
    verify_terminal,
)
from .pipeline import PipelineConfig, build_cover, pull_back
from .sampling import SampleSizeConfig, cover_sample_size, draw_sample, kde_sample_size
from .signatures import PointSet, Signature, ddelta, kde, signature
from .terminal_jl import EmbeddingInfeasible, TerminalEmbedding, build_embedding, embed, jl_dim
