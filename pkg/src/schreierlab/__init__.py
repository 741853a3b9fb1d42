"""Schreier families, Lorentz sequence spaces and domination constants.

The modules build on each other in order: :mod:`ordinal` (indices below
omega^omega), :mod:`schreier` (the families S_xi), :mod:`seqspace` (weights
and norms), :mod:`pairgen` (the alternating weight pair) and
:mod:`dominate` (domination constants and the counterexample report).
"""

from .ordinal import OMEGA, OMEGA_1, Ordinal, OrdinalError, format_ordinal, fundamental, parse_ordinal
from .schreier import (
    ResourceLimitError,
    enumerate_maximal,
    find_L,
    is_member,
    is_member_exhaustive,
    threshold,
)
from .seqspace import (
    WeightSpec,
    em_power_sum,
    lorentz_norm,
    lp_norm,
    pair_norm,
    power_sum,
    summing_lorentz_norm,
)
from .pairgen import AlternatingPair, PrecisionBudgetError, build_pair, validate_pair
from .dominate import (
    C0,
    Lorentz,
    Lp,
    PairSum,
    counterexample_report,
    domination_constant,
    parse_norm,
)
from .suite import RunConfig, emit_plotdata, run_suite

__version__ = "0.1.0"

__all__ = [
    "OMEGA", "OMEGA_1", "Ordinal", "OrdinalError", "format_ordinal", "fundamental", "parse_ordinal",
    "ResourceLimitError", "enumerate_maximal", "find_L", "is_member", "is_member_exhaustive",
    "threshold",
    "WeightSpec", "em_power_sum", "lorentz_norm", "lp_norm", "pair_norm", "power_sum",
    "summing_lorentz_norm",
    "AlternatingPair", "PrecisionBudgetError", "build_pair", "validate_pair",
    "C0", "Lorentz", "Lp", "PairSum", "counterexample_report", "domination_constant", "parse_norm",
    "RunConfig", "emit_plotdata", "run_suite",
]
