"""Single-valued p-adic integration on curves with semi-stable reduction.

Local Coleman primitives are glued along the dual graph of the special fibre by
splitting their edge differences into a harmonic and an exact cochain.
"""

from .assembly import (
    Normalization,
    PrimitiveFamily,
    annulus_interpolate,
    integrate_rational_form,
    normalize_primitives,
)
from .errors import (
    DisconnectedGraphError,
    DivisorMeetsAnnulusError,
    GraphError,
    NotAUnitError,
    PadicError,
    PadicZeroDivisionError,
    ParseError,
    PrecisionError,
    ReductionTypeError,
    VologodskyError,
)
from .graphs import (
    Cochain,
    Decomposition,
    DualGraph,
    Edge,
    VertexFunction,
    coboundary,
    cycle_sum,
    decompose,
    divergence,
    is_harmonic,
    lift_cochain,
    subdivide,
)
from .laurent import (
    Component,
    LaurentPolynomial,
    NewtonPolygon,
    annulus_residue_dlog,
    lemma_check,
    newton_polygon,
    ord_component,
    root_valuation_counts,
)
from .padic import (
    LogBranch,
    PadicContext,
    PadicNumber,
    field_arithmetic,
    parse_padic,
    plog,
    teichmuller,
    valuation,
)
from .tate import TateCurve, TatePoint, logq_closed_form, tate_cochain, tate_dual_graph, vologodsky_log

__version__ = "0.1.0"
