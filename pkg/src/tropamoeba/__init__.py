"""Tropical hypersurfaces, their real versions, and dequantized amoebas."""

from importlib import resources

from .dequant_amoeba import (
    AmoebaSample,
    DeformationSample,
    IdealPointReport,
    LogPoint,
    SpherePoint,
    aberth_roots,
    archimedean_slack,
    deform_family,
    hausdorff_to_tropical,
    ideal_point_limit,
    log_map,
    sample_amoeba,
    sample_orthant_curve,
    sample_plane_curve_amoeba,
    sphere_project,
)
from .polyhedral import (
    PolyCell,
    PolyComplex,
    SphereTrace,
    cells_T,
    cells_TR,
    check_face_intersections,
    complex_dim,
    cone_rays,
    intersect_T,
    is_cone,
    member_T,
    member_TR,
    sphere_trace,
)
from .polynomials import (
    LaurentPoly,
    OrthantSign,
    PolyFormatError,
    TropPoly,
    dequantize_positive,
    eval_deq,
    eval_laurent,
    eval_trop,
    load_poly,
    poly_from_json,
    poly_to_json,
    sign_split,
    tropicalize_trivial,
    tropicalize_valued,
)
from .puiseux import (
    NewtonRoots,
    PrecisionError,
    PuiseuxSeries,
    kapranov_check,
    newton_polygon_roots,
    nonarch_amoeba_point,
    parse_series_poly,
    tropical_roots,
)
from .teichmueller import (
    Character,
    Sl2Pair,
    Word,
    boundary_ray_limit,
    char_of_pair,
    length_of_trace,
    markov_residual,
    markov_tropical_cone,
    projection_compatibility_check,
    realize_pair,
    teich_solve_z,
    trace_of_word,
    trace_polynomial,
)
from .tropical_core import DequantParam, deq_add, deq_inverse, deq_mul, deq_sum, deq_value, semifield_add, trop_add, trop_mul
from .valuations import (
    LexGroupElement,
    MonomialValuation,
    descend_valuation,
    group_divide,
    height,
    monval_apply,
    rank_reduce,
    z_map,
)

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a shipped example file, e.g. ``data_path("line.json")``."""
    return resources.files(__name__).joinpath("data", name)
