"""Exact ramification theory of prime-order Brauer classes over function
fields of arithmetic surface models: tame symbols, residue vectors over
finite-field curves, the nodal-point taxonomy, blowup surgery, the index-q
criterion, and construction plus verification of cyclic splitting data."""

from .gfq import GF, FqField, UnitClass, extend_field, frobenius_invariant, mu_q_closure, unit_class
from .ffield import (
    FunctionField,
    Place,
    RationalFunction,
    function_field,
    is_qth_power,
    tame_residue,
    valuation,
)
from .twovar import (
    LocalClass,
    MonomialValuation,
    SplitMode,
    TwoVarPoly,
    TwoVarRational,
    is_qth_power_2var,
    ramification_of_sum,
    split_check,
)
from .curvebr import (
    CyclicCoverData,
    ResidueVector,
    cyclic_residues,
    is_zero,
    residual_transform,
    split_by_cover,
    symbol_residues,
)
from .ramgraph import CurveKind, CurveNode, NodePoint, PointClass, RamGraph, TailBI, TailBII
from .splitdrv import (
    GateError,
    MeetRecord,
    SplittingDatum,
    SurfaceModel,
    VerificationReport,
    construct_splitting,
    index_is_q,
    kill_residuals,
    residual_class,
    resolve_model,
    verify_splitting,
)

__version__ = "0.1.0"
