"""Certified triangle-free regular graphs with a small second eigenvalue."""

from .alon import AlonSpec, build_alon, generator_set
from .gf2k import FieldCtx, make_field
from .graph import Graph, build_graph, degree_stats, induced, is_independent, overlay, triangle_count
from .regularize import plan, synthesize
from .spectral import SpectralReport, compute_lambda, deletion_bounds, mixing_deviation
from .sponge import Pentagon, Sponge, SpongeConfig, build_sponge, c5_bundle, sponge_reduce

__version__ = "0.1.0"
