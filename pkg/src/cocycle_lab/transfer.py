"""From a point with slow norm growth to a periodic orbit with a small exponent.

Given ``x`` with ``||A^n0(x)||`` small, close the orbit segment
``x_0 .. x_n0`` into a periodic point ``p`` with a shortest connecting word,
splice ``y = [p, x]`` and rebuild ``A^(n0+n1)(p)`` as

    A^n1(T^n0 p) H^u_{T^n0 p <- T^n0 y} H^s_{T^n0 y <- T^n0 x} A^n0(x) H^s_{x <- y} H^u_{y <- p}.

Every factor other than ``A^n0(x)`` is bounded by a constant ``C`` that is
measured on the run, which bounds the exponent of ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cocycle import Cocycle, bunching_check, product
from .errors import EmptySearchSet, IdentityResidualExceeded, NotBunched
from .holonomy import EPS, stable_holonomy, unstable_holonomy
from .lyapunov import periodic_exponent
from .symbolic import (
    PeriodicOrbit,
    SymbolSequence,
    bracket,
    connecting_word,
    enumerate_periodic,
    in_local_stable,
    in_local_unstable,
    iter_orbit_points,
    shift,
)


@dataclass(frozen=True)
class SlowPoint:
    x: SymbolSequence
    norm: float
    log_norm: float
    searched: int


def find_slow_point(spec: Cocycle, n0: int, points=(), max_period=8) -> SlowPoint:
    """Point minimizing ``||A^n0(x)||`` over periodic points up to ``max_period`` and ``points``."""
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    cands = list(iter_orbit_points(enumerate_periodic(spec.sft, max_period))) if max_period > 0 else []
    cands.extend(points)
    if not cands:
        raise EmptySearchSet("no candidate points to search")
    best, best_ln = None, math.inf
    for x in cands:
        ln = product(spec, x, n0).log_norm
        if ln < best_ln:
            best, best_ln = x, ln
    return SlowPoint(best, math.exp(best_ln), best_ln, len(cands))


@dataclass(frozen=True)
class Shadow:
    x: SymbolSequence
    n0: int
    connector: tuple
    n1: int
    word: tuple
    p: SymbolSequence
    y: SymbolSequence

    @property
    def orbit(self):
        return PeriodicOrbit(self.word)

    @property
    def period(self):
        return self.n0 + self.n1


def build_shadow(spec_or_sft, x: SymbolSequence, n0: int) -> Shadow:
    """Periodic point following ``x`` for ``n0`` steps, and the splice ``y = [p, x]``."""
    sft = getattr(spec_or_sft, "sft", spec_or_sft)
    if n0 < 0:
        raise ValueError("n0 must be >= 0")
    head = x.window(0, n0)
    c, n1 = connecting_word(sft, x[n0], x[0])
    word = head + c
    p = SymbolSequence.periodic(word)
    y = bracket(p, x)
    # the three memberships used by the holonomy identity
    assert in_local_unstable(shift(y, n0), shift(p, n0)), "T^n0 y not in W^u_loc(T^n0 p)"
    assert in_local_stable(y, x), "y not in W^s_loc(x)"
    assert in_local_stable(shift(x, n0), shift(y, n0)), "T^n0 x not in W^s_loc(T^n0 y)"
    return Shadow(x, n0, c, n1, word, p, y)


@dataclass(frozen=True)
class TransferReport:
    x: SymbolSequence
    n0: int
    eps: float | None
    connector: tuple
    n1: int
    p: SymbolSequence
    y: SymbolSequence
    factor_names: tuple
    factor_norms: tuple
    holonomy_errors: tuple
    C: float
    identity_residual: float
    residual_budget: float
    log_norm_period: float
    log_bound: float
    lambda_p: float
    exponent_bound: float
    exponent_bound_eps: float | None
    norm_bound_holds: bool
    exponent_bound_holds: bool
    n1_max: int

    @property
    def passed(self):
        return self.norm_bound_holds and self.exponent_bound_holds and self.n1 <= self.n1_max


FACTOR_NAMES = (
    "A^n1(T^n0 p)",
    "H^u(T^n0 p <- T^n0 y)",
    "H^s(T^n0 y <- T^n0 x)",
    "A^n0(x)",
    "H^s(x <- y)",
    "H^u(y <- p)",
)


def transfer_bound(spec: Cocycle, shadow: Shadow, tol=1e-8, eps=None) -> TransferReport:
    """Evaluate the six factors, check the product identity and the exponent bound for ``p``."""
    bunch = bunching_check(spec)
    if not bunch.bunched:
        raise NotBunched(f"bunching margin {bunch.margin:.6g} >= 1")
    x, y, p, n0, n1 = shadow.x, shadow.y, shadow.p, shadow.n0, shadow.n1
    px, yx, xx = shift(p, n0), shift(y, n0), shift(x, n0)
    f1 = product(spec, px, n1)
    h1 = unstable_holonomy(spec, px, yx)
    h2 = stable_holonomy(spec, yx, xx)
    f4 = product(spec, x, n0)
    h3 = stable_holonomy(spec, x, y)
    h4 = unstable_holonomy(spec, y, p)
    hols = (h1, h2, h3, h4)

    inner = f1.matrix @ h1.matrix @ h2.matrix @ f4.matrix @ h3.matrix @ h4.matrix
    target = product(spec, p, n0 + n1)
    recon = inner * math.exp(f1.log_scale + f4.log_scale - target.log_scale)
    scale = target.matrix.norm()
    residual = (recon - target.matrix).norm() / scale

    norms = (f1.norm(), h1.matrix.norm(), h2.matrix.norm(), f4.norm(), h3.matrix.norm(), h4.matrix.norm())
    log_norms = [math.log(v) for v in norms]
    log_norms[0], log_norms[3] = f1.log_norm, f4.log_norm
    total_log = sum(log_norms)
    # each holonomy error enters multiplied by the other five factors; rounding adds a floor
    amplified = sum(h.error_bound * math.exp(total_log - math.log(norms[i])) for i, h in
                    zip((1, 2, 4, 5), hols))
    floor = 16.0 * (n0 + n1 + 6) * EPS * math.exp(total_log)
    budget = 10.0 * (amplified + floor) / math.exp(target.log_norm)
    if residual > budget:
        raise IdentityResidualExceeded(f"relative residual {residual:.3e} exceeds {budget:.3e}")

    C = max(norms[i] for i in (0, 1, 2, 4, 5))
    log_c = math.log(C)
    log_bound = 5.0 * log_c + f4.log_norm
    lam = periodic_exponent(spec, (p, n0 + n1)).lambda_plus
    bound = log_bound / (n0 + n1)
    bound_eps = (5.0 * log_c + n0 * eps) / (n0 + n1) if eps is not None else None
    return TransferReport(
        x, n0, eps, shadow.connector, n1, p, y, FACTOR_NAMES, norms,
        tuple(h.error_bound for h in hols), C, residual, budget,
        target.log_norm, log_bound, lam, bound, bound_eps,
        target.log_norm <= log_bound + math.log1p(tol),
        lam <= bound + tol,
        spec.sft.max_m,
    )


def run_transfer(spec: Cocycle, n0: int, eps=None, points=(), max_period=8, tol=1e-8) -> tuple:
    """``find_slow_point``, then ``build_shadow`` and ``transfer_bound`` on the result."""
    slow = find_slow_point(spec, n0, points, max_period)
    shadow = build_shadow(spec, slow.x, n0)
    return slow, shadow, transfer_bound(spec, shadow, tol, eps)
