"""Numerical tools for SL(2,R) cocycles over subshifts of finite type."""
from . import counterexample  # registers the built-in cocycles
from .cocycle import (
    Cocycle,
    LocallyConstantCocycle,
    ProductResult,
    bunching_check,
    constant_cocycle,
    holder_estimate,
    make_builtin,
    one_step,
    product,
    recode_one_step,
)
from .counterexample import CounterexampleParams, DiagRotationCocycle
from .errors import *  # noqa: F401,F403
from .holonomy import stable_holonomy, unstable_holonomy, verify_identities
from .lyapunov import domination_test, gap_scan, periodic_exponent, sampled_exponent
from .sl2 import Mat2, ProjectiveArc
from .specfile import dump_spec, load_spec, parse_point, parse_spec
from .symbolic import (
    PeriodicOrbit,
    SymbolSequence,
    TransitionMatrix,
    bracket,
    enumerate_periodic,
    full_shift,
    shift,
)
from .transfer import build_shadow, find_slow_point, run_transfer, transfer_bound
from .uh import certify, cone_certify, extract_directions, norm_growth_probe

__version__ = "0.1.0"
