"""List colouring of triangle-free plane graphs with precoloured boundary paths."""

from .engine import EngineOutcome, Kind, ReductionStep, apply_reduction, colour_target, fallback_brute, precolour_vertex, recombine
from .errors import EmbeddingError, EngineError, EnumerationError, FormatError, NoColouringError, TargetError, TfplcError
from .io import format_instance, parse_instance, read_planar_code, write_planar_code
from .oracle import Status, SufficiencyQuery, Verdict, brute_force_colour, enumerate_canonical_lists, verify_k_sufficient, verify_theorem1_sweep
from .plane import PlaneGraph, build_plane_graph
from .semifan import semi_fan_colour
from .target import Target, ValidityReport, make_target, validity_report

__version__ = "0.1.0"
