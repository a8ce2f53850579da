"""A non-uniformly-hyperbolic SL(2) cocycle over the full 2-shift with a uniform exponent gap.

``A(x) = D R_theta(x)`` with ``D = diag(2, 1/2)``. The rotation angle is
``pi/2`` at the homoclinic point ``q`` (a single 1 at index 0), close to
``pi/2`` on points of ``V = {x_0 = 1}`` whose other 1s are far away, and 0
everywhere else. The homoclinic excursion through ``q`` destroys uniform
hyperbolicity, while invariant cones along returns to ``V`` keep every
periodic exponent at least ``log(2)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cocycle import Cocycle, product, register_builtin
from .errors import ConeStepViolated, ConeUndefined, NoReturn
from .lyapunov import finite_time_exponent, gap_scan, periodic_exponent
from .sl2 import HALF_PI, PI, Mat2, ProjectiveArc, arc_image, inclusion_margin, min_growth_on_arc, mod_pi, rotation, unit
from .symbolic import PeriodicOrbit, SymbolSequence, full_shift, shift

D = Mat2.diag(2.0, 0.5)
LOG2 = math.log(2.0)
K_SCAN = 512
SLACK = 1e-12
HORIZONTAL_CONE = ProjectiveArc(0.0, 0.25 * PI)

Q_POINT = SymbolSequence((0,), (1,), (0,), 0)
ZERO = SymbolSequence.constant(0)


# -- the six inequalities that fix k0 ------------------------------------------------------


def _beta(k):
    return 2.0 ** (-k / 2.0 + 0.25)


def _gamma(k):
    return math.atan(2.0 ** (-1.5 * k - 0.125))


INEQUALITIES = {
    "rotation-offset-below-0.3": lambda k: 2.0 ** (-k / 8.0) < 0.3,
    "sin-beta-lower-bound": lambda k: math.sin(_beta(k)) > 2.0 ** (-0.125) * _beta(k),
    "cot-beta-upper-bound": lambda k: 1.0 / math.tan(_beta(k)) <= 2.0 ** 0.125 / _beta(k),
    "gamma-vs-tan-gamma": lambda k: _gamma(k) <= 2.0 ** (1.0 / 16.0) * math.tan(_gamma(k)),
    "band-below-vertical": lambda k: HALF_PI > 2.0 ** (-k / 8.0) + _beta(k),
    "final-chain": lambda k: 2.0 ** (3.0 * k / 8.0) - 2.0 ** 0.25 >= 1.0,
}


def inequality_thresholds(k_max=K_SCAN):
    """For each inequality, the smallest ``k`` from which it holds on all of ``[k, k_max]``."""
    out = {}
    for name, check in INEQUALITIES.items():
        first = k_max + 1
        for k in range(k_max, 0, -1):
            if not check(k):
                break
            first = k
        out[name] = first
    return out


@lru_cache(maxsize=None)
def determine_k0(k_max=K_SCAN) -> int:
    """Smallest ``k0`` with every inequality true for all integers ``k0 < k <= k_max``."""
    return max(inequality_thresholds(k_max).values()) - 1


@dataclass(frozen=True)
class CounterexampleParams:
    k0: int = field(default_factory=determine_k0)

    def __post_init__(self):
        k0 = int(self.k0)
        if k0 < 1:
            raise ValueError("k0 must be a positive integer")
        bad = [name for name, check in INEQUALITIES.items() if not all(check(k) for k in range(k0 + 1, K_SCAN + 1))]
        if bad:
            raise ValueError(f"k0 = {k0} is too small: {', '.join(bad)} fail above it")
        object.__setattr__(self, "k0", k0)


# -- exact evaluation on eventually periodic points ----------------------------------------


def _check_binary(x):
    if not x.symbols() <= {0, 1}:
        raise ValueError("the counterexample lives on the full shift over {0, 1}")


def next_one(x: SymbolSequence, start: int, step: int):
    """First ``n = start, start + step, ...`` with ``x_n = 1``, or ``None`` if there is none."""
    lo, hi = x.extent()
    n = start
    if step > 0:
        stop = max(start, hi) + len(x.right)
        while n <= stop:
            if x[n] == 1:
                return n
            n += 1
    else:
        stop = min(start, lo) - len(x.left)
        while n >= stop:
            if x[n] == 1:
                return n
            n -= 1
    return None


def k_of(x: SymbolSequence):
    """``min |n|`` over ``n != 0`` with ``x_n = 1``; ``math.inf`` when there is none."""
    _check_binary(x)
    fwd = next_one(x, 1, 1)
    bwd = next_one(x, -1, -1)
    cands = [abs(n) for n in (fwd, bwd) if n is not None]
    return min(cands) if cands else math.inf


def _rotation_for(k):
    """``R_theta`` for ``theta = pi/2 - 2^(-k/8)`` built from the small offset directly."""
    delta = 2.0 ** (-k / 8.0)
    c, s = math.sin(delta), math.cos(delta)
    return Mat2(c, -s, s, c)


def theta(x: SymbolSequence, params: CounterexampleParams | None = None) -> float:
    params = params or CounterexampleParams()
    _check_binary(x)
    if x[0] != 1:
        return 0.0
    k = k_of(x)
    if k == math.inf:
        return HALF_PI
    if k <= params.k0:
        return 0.0
    return HALF_PI - 2.0 ** (-k / 8.0)


def _matrix_at(x, params):
    if x[0] != 1:
        return D
    k = k_of(x)
    if k == math.inf:
        return D @ rotation(HALF_PI)
    if k <= params.k0:
        return D
    return D @ _rotation_for(k)


class DiagRotationCocycle(Cocycle):
    """``A(x) = diag(2, 1/2) R_theta(x)`` over the full 2-shift on ``{0, 1}``."""

    def __init__(self, k0=None, alpha=0.125):
        self.params = CounterexampleParams() if k0 is None else CounterexampleParams(k0)
        self.sft = full_shift(2, 0)
        self.alpha = float(alpha)
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"Hoelder exponent {self.alpha} outside (0, 1]")
        self.window = None

    name = "diag-rotation"

    def __repr__(self):
        return f"DiagRotationCocycle(k0={self.params.k0}, alpha={self.alpha})"

    def __eq__(self, other):
        return isinstance(other, DiagRotationCocycle) and (self.params, self.alpha) == (other.params, other.alpha)

    __hash__ = None

    @property
    def k0(self):
        return self.params.k0

    def evaluate(self, x):
        _check_binary(x)
        return _matrix_at(x, self.params)

    def matrices(self, x, start, count):
        _check_binary(x)
        out = []
        for k in range(start, start + count):
            out.append(D if x[k] != 1 else _matrix_at(shift(x, k), self.params))
        return out

    def sup_norm(self):
        return 2.0

    def probe_points(self, horizon):
        """``T^-n q`` for ``2n <= horizon``: the homoclinic excursions."""
        return [homoclinic_point(n) for n in range(1, horizon // 2 + 1)]

    def holder_constant(self, alpha=None):
        """Closed-form Hoelder constant for exponent ``1/8``.

        ``||A(x) - A(y)|| <= 2 ||R_theta(x) - R_theta(y)|| <= 2 sqrt(2)``, and any two
        points with different matrices lie at distance at least ``2^-k0``
        unless both carry the smooth branch, where ``2^-k/8 = d(x, q)^(1/8)``.
        """
        alpha = self.alpha if alpha is None else alpha
        if alpha > 0.125:
            return math.inf
        return 2.0 * math.sqrt(2.0) * 2.0 ** (alpha * self.params.k0)


@register_builtin("diag-rotation")
def _make(k0=None, alpha=0.125):
    return DiagRotationCocycle(k0, alpha)


# -- returns to V ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReturnStep:
    x: SymbolSequence
    n_return: int
    k: float
    k_next: float
    matrix: Mat2
    image: SymbolSequence

    def __post_init__(self):
        assert self.n_return >= 1
        assert self.k <= self.n_return and self.k_next <= self.n_return


def in_v0(x: SymbolSequence) -> bool:
    """``x_0 = 1`` and the right tail contains a 1 (so the orbit returns to ``V`` forever)."""
    return x[0] == 1 and 1 in x.right


def first_return(x: SymbolSequence, params: CounterexampleParams | None = None) -> ReturnStep:
    params = params or CounterexampleParams()
    _check_binary(x)
    if x[0] != 1:
        raise ValueError("first returns start from a point of V (x_0 = 1)")
    n = next_one(x, 1, 1)
    if n is None:
        raise NoReturn(f"{x!r} never returns to V")
    y = shift(x, n)
    mat = product(DiagRotationCocycle(params.k0), x, n).true_matrix()
    return ReturnStep(x, n, k_of(x), k_of(y), mat, y)


def cone_of(x: SymbolSequence, params: CounterexampleParams | None = None, strict=True, beta_scale=1.0):
    """Invariant cone at ``x`` in ``V``: all directions outside a band around angle ``pi/2 - theta``.

    For ``k(x) <= k0`` the cone is undefined; with ``strict=False`` the horizontal
    quarter cone is returned instead.
    """
    params = params or CounterexampleParams()
    if x[0] != 1:
        raise ConeUndefined("cones are defined on V only")
    k = k_of(x)
    if k == math.inf:
        raise ConeUndefined("the excluded band at q collapses to a single direction")
    if k <= params.k0:
        if strict:
            raise ConeUndefined(f"k(x) = {k} <= k0 = {params.k0}")
        return HORIZONTAL_CONE
    th = HALF_PI - 2.0 ** (-k / 8.0)
    beta = beta_scale * _beta(k)
    if not 0.0 < HALF_PI - th - beta:
        raise ConeUndefined(f"band at k = {k} reaches the horizontal axis")
    return ProjectiveArc(mod_pi(PI - th), HALF_PI - beta)


@dataclass(frozen=True)
class ConeStepReport:
    n_return: int
    k: float
    k_next: float
    inclusion_margin: float
    growth: float
    growth_bound: float
    tan_gamma: float | None
    tan_gamma_bound: float | None
    chain_value: float | None
    substituted: bool


def verify_cone_step(x: SymbolSequence, params: CounterexampleParams | None = None, beta_scale=1.0) -> ConeStepReport:
    """Check ``A_V(x) C(x) inside C(T_V x)`` and the growth bound ``2^(N_V/2)`` on ``C(x)``.

    ``beta_scale`` shrinks or widens the excluded band; values other than 1 are
    used as a negative control.
    """
    params = params or CounterexampleParams()
    step = first_return(x, params)
    n = step.n_return
    src = cone_of(x, params, strict=False, beta_scale=beta_scale)
    tgt = cone_of(step.image, params, strict=False, beta_scale=beta_scale)
    img = arc_image(step.matrix, src)
    margin = inclusion_margin(tgt, img)
    growth = min_growth_on_arc(step.matrix, src)
    bound = 2.0 ** (n / 2.0)
    if not margin > 0.0:
        raise ConeStepViolated(f"A_V(x) C(x) leaves C(T_V x) (margin {margin:.3e}) at {x!r}")
    if growth < bound * (1.0 - SLACK):
        raise ConeStepViolated(f"growth {growth:.6g} < 2^(N_V/2) = {bound:.6g} at {x!r}")

    tan_g = tan_bound = chain = None
    if step.k > params.k0:
        tan_g = math.tan(img.half_width)
        tan_bound = 2.0 ** (-1.5 * n - 0.125)
        if tan_g > tan_bound * (1.0 + SLACK):
            raise ConeStepViolated(f"tan(gamma) = {tan_g:.3e} exceeds 2^(-3N/2 - 1/8) = {tan_bound:.3e}")
    if step.k_next > params.k0:
        kn = step.k_next
        chain = 2.0 ** (-kn / 2.0) * (2.0 ** (3.0 * kn / 8.0) - 2.0 ** 0.25)
        if chain < 2.0 ** (-kn / 2.0) * (1.0 - SLACK):
            raise ConeStepViolated(f"final chain value {chain:.3e} below 2^(-k/2) at k = {kn}")
    return ConeStepReport(
        n, step.k, step.k_next, margin, growth, bound, tan_g, tan_bound, chain,
        step.k <= params.k0 or step.k_next <= params.k0,
    )


def nested_cones(x: SymbolSequence, depth: int, params: CounterexampleParams | None = None):
    """``A_V^n C(x)`` for ``n = 0..depth`` along a point with ``T_V x = x``.

    Each arc contains the next one when the cones are invariant.
    """
    params = params or CounterexampleParams()
    step = first_return(x, params)
    if step.image != x:
        raise ValueError("nested cones are tracked along self-returning points")
    arcs = [cone_of(x, params, strict=False)]
    for _ in range(depth):
        arcs.append(arc_image(step.matrix, arcs[-1]))
    return arcs


# -- verification drivers -----------------------------------------------------------------


@dataclass(frozen=True)
class NotUHReport:
    n_max: int
    norms: tuple
    max_deviation: float
    contrast_log_norms: tuple
    passed: bool


def homoclinic_point(n: int) -> SymbolSequence:
    """``T^-n q``: the single 1 sits at index ``n``."""
    return shift(Q_POINT, -n)


def verify_not_uh(n_max: int, params: CounterexampleParams | None = None, tol=1e-10) -> NotUHReport:
    """``||A^(2n)(T^-n q)|| = 1`` for ``n <= n_max``: the norm never grows along the homoclinic orbit."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    spec = DiagRotationCocycle(None if params is None else params.k0)
    norms, contrast = [], []
    for n in range(1, n_max + 1):
        norms.append(product(spec, homoclinic_point(n), 2 * n).norm())
        contrast.append(product(spec, ZERO, 2 * n).log_norm)
    dev = max(abs(v - 1.0) for v in norms)
    return NotUHReport(n_max, tuple(norms), dev, tuple(contrast), dev <= tol)


def self_return_point(m: int) -> SymbolSequence:
    """Periodic point ``(1 0^(2m))^inf`` with ``x_0 = 1``."""
    return SymbolSequence.periodic((1,) + (0,) * (2 * m))


def random_v0_point(rng, deep_k0=None, max_core=40, max_tail=20) -> SymbolSequence:
    """Random point of ``V_0``; with ``deep_k0`` set, its nearest other 1 is beyond ``deep_k0``."""
    density = float(rng.choice([0.5, 0.2, 0.08, 0.03]))
    left_len = int(rng.integers(0, max_core + 1))
    right_len = int(rng.integers(0, max_core + 1))
    past = [int(b) for b in rng.random(left_len) < density]
    future = [int(b) for b in rng.random(right_len) < density]
    if deep_k0 is not None:
        gap_r = int(rng.integers(deep_k0, deep_k0 + 25))
        gap_l = int(rng.integers(deep_k0, deep_k0 + 25))
        future = [0] * gap_r + [1] + future
        past = past + [1] + [0] * gap_l
    tail_r = [int(b) for b in rng.random(int(rng.integers(1, max_tail + 1))) < density]
    tail_r[int(rng.integers(len(tail_r)))] = 1
    if deep_k0 is not None:
        tail_r = tail_r + [0] * deep_k0
    tail_l = [int(b) for b in rng.random(int(rng.integers(1, max_tail + 1))) < density]
    if deep_k0 is not None:
        tail_l = [0] * (deep_k0 + 1)
    core = tuple(past) + (1,) + tuple(future)
    return SymbolSequence(tuple(tail_l), core, tuple(tail_r), -len(past))


@dataclass(frozen=True)
class OrbitTrack:
    x: SymbolSequence
    returns: int
    total_time: int
    log_growth: float
    worst_slack: float
    passed: bool


def track_orbit(x: SymbolSequence, returns: int, params: CounterexampleParams | None = None) -> OrbitTrack:
    """Push a cone vector through ``returns`` successive returns to ``V``.

    After every return the accumulated growth must be at least ``2^(sum N_V / 2)``.
    """
    params = params or CounterexampleParams()
    if not in_v0(x):
        raise NoReturn(f"{x!r} is not in V_0")
    v = unit(cone_of(x, params, strict=False).center)
    total, log_g, worst = 0, 0.0, math.inf
    ok = True
    for _ in range(returns):
        step = first_return(x, params)
        cone = cone_of(x, params, strict=False)
        if not cone.contains_direction(math.atan2(v[1], v[0]), closed=True):
            ok = False
        w = step.matrix @ v
        r = math.hypot(*w)
        log_g += math.log(r)
        v = (w[0] / r, w[1] / r)
        total += step.n_return
        slack = log_g - 0.5 * total * LOG2
        worst = min(worst, slack)
        if slack < -1e-9:
            ok = False
        x = step.image
    return OrbitTrack(x, returns, total, log_g, worst, ok)


@dataclass(frozen=True)
class ExponentBoundReport:
    tau: float
    scan: object
    deep_exponents: tuple
    tracks: tuple
    off_v_exponent: float
    passed: bool


def verify_exponent_bound(max_period: int, samples=200, params: CounterexampleParams | None = None,
                          seed=0, returns=30, deep_m=range(7, 16)) -> ExponentBoundReport:
    """Exponent gap ``lambda_+ >= log(2)/2`` checked three ways.

    Exact periodic exponents up to ``max_period`` plus the self-return family
    ``(1 0^(2m))^inf``, cone tracking along sampled points of ``V_0``, and the
    exponent of the fixed point ``0^inf`` (the only orbit avoiding ``V``).
    """
    params = params or CounterexampleParams()
    spec = DiagRotationCocycle(params.k0)
    tau = 0.5 * LOG2 - 1e-9
    scan = gap_scan(spec, max_period, tau)
    deep = tuple(
        (m, periodic_exponent(spec, PeriodicOrbit(self_return_point(m).right)).lambda_plus) for m in deep_m
    )
    if isinstance(samples, int):
        rng = np.random.default_rng(seed)
        points = [random_v0_point(rng) for _ in range(samples)]
    else:
        points = list(samples)
    tracks = tuple(track_orbit(x, returns, params) for x in points)
    off_v = finite_time_exponent(spec, ZERO, 64)
    passed = (
        scan.holds
        and all(lam >= tau for _, lam in deep)
        and all(t.passed for t in tracks)
        and abs(off_v - LOG2) <= 1e-12
    )
    return ExponentBoundReport(tau, scan, deep, tracks, off_v, passed)
