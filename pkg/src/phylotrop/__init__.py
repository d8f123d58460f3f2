"""Geodesic (BHV) and tropical geometry on orthant spaces and tree space."""

from .centroid import CentroidResult, centroid_in_treespace, fermat_weber, fermat_weber_objective
from .complex import (
    CladeFan,
    OrthantPoint,
    SimplicialComplex,
    clade_fan,
    enumerate_maximal_nested_sets,
    is_flag,
)
from .errors import (
    CertificateError,
    NotFlagError,
    ParseError,
    PhylotropError,
    ResourceError,
    ValidationError,
)
from .experiments import DepthExperimentConfig, DepthTable, depth_experiment
from .geodesic import Geodesic, SupportPair, find_support_pair, geodesic, geodesic_distance, verify_support_pair
from .hull import (
    HullCloud,
    Thm35Instance,
    caterpillar_clades,
    hull_dimension_report,
    hull_iterate,
    thm35_instance,
)
from .hull2d import CellComplex2D, trop_hull_2d
from .lp import LinearProgram, LPResult, lp_solve
from .newick import emit_newick, parse_newick
from .sampler import nni_move, sample_pair, sample_tree
from .svg import render_svg
from .treespace import (
    EquidistantTree,
    Ultrametric,
    bhv_geodesic,
    compose,
    decompose,
    is_ultrametric,
    normalize_u1,
    subdominant_ultrametric,
)
from .tropical import (
    PluckerVector,
    TropicalPoint,
    TropicalSegment,
    blue_rule_project,
    segment_depth,
    trop_distance,
    trop_project_polytope,
    trop_segment,
    tropical_determinant,
)

__version__ = "0.1.0"
