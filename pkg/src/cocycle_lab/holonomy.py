"""Stable and unstable holonomies of fiber-bunched SL(2) cocycles.

``H^s_{x<-y} = lim A^n(x)^-1 A^n(y)`` for ``y`` on the stable set of ``x`` and
``H^u_{x<-y} = lim A^-n(x)^-1 A^-n(y)`` on the unstable set. For locally
constant cocycles the factors of the two products agree after finitely many
steps, so the limit is reached exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cocycle import Cocycle, LocallyConstantCocycle, bunching_check, product
from .errors import NotBunched, NotOnStableSet, NotOnUnstableSet
from .sl2 import I, Mat2
from .symbolic import SymbolSequence, distance, shift, stable_index, unstable_index

EPS = 2.0 ** -52
MIN_STEPS = 8
MAX_STEPS = 20000


@dataclass(frozen=True)
class HolonomyResult:
    matrix: Mat2
    n_used: int
    error_bound: float
    side: str
    x: SymbolSequence
    y: SymbolSequence


def _adj(m):
    return Mat2(m.d, -m.b, -m.c, m.a)


def _sl2_quotient(px, py):
    """``P_x^-1 P_y`` for renormalized SL(2) products, via the adjugate."""
    return _adj(px.matrix) @ py.matrix * math.exp(px.log_scale + py.log_scale)


def _rounding_floor(k, px, py):
    return 16.0 * (k + 1) * EPS * math.exp(px.log_norm + py.log_norm)


def _require_bunched(spec):
    rep = bunching_check(spec)
    if not rep.bunched:
        raise NotBunched(f"bunching margin {rep.margin:.6g} >= 1; holonomies need not exist")
    return rep.margin


def _exact(spec, x, y, k, side):
    sign = 1 if side == "stable" else -1
    px = product(spec, x, sign * k)
    py = product(spec, y, sign * k)
    h = _sl2_quotient(px, py) if k else I
    return HolonomyResult(h, k, _rounding_floor(k, px, py) if k else 0.0, side, x, y)


def _limit(spec, x, y, tol, b, side, min_steps):
    """Iterate ``H_n`` until increments fall below ``tol (1 - b)``.

    The discarded tail is bounded by a geometric series with the measured
    increment ratio (the bunching margin when the ratio is not yet below 1).
    """
    sign = 1 if side == "stable" else -1
    px = product(spec, x, 0)
    py = product(spec, y, 0)
    h = I
    prev_delta = delta = math.inf
    n = 0
    while n < MAX_STEPS:
        px = product(spec, shift(x, sign * n), sign) @ px
        py = product(spec, shift(y, sign * n), sign) @ py
        n += 1
        h_new = _sl2_quotient(px, py)
        prev_delta, delta = delta, (h_new - h).norm()
        h = h_new
        if n >= min_steps and delta < tol * (1.0 - b):
            break
    ratio = delta / prev_delta if 0.0 < delta < prev_delta else b
    tail = delta * ratio / (1.0 - ratio)
    return HolonomyResult(h, n, max(tail, delta, _rounding_floor(n, px, py)), side, x, y)


def _holonomy(spec, x, y, tol, method, side):
    if method not in ("auto", "exact", "limit"):
        raise ValueError(f"unknown method {method!r}")
    b = _require_bunched(spec)
    if side == "stable":
        m = stable_index(x, y)
        if m is None:
            raise NotOnStableSet(f"{y!r} is not on the stable set of {x!r}")
        if m == -math.inf:
            return HolonomyResult(I, 0, 0.0, side, x, y)
    else:
        m = unstable_index(x, y)
        if m is None:
            raise NotOnUnstableSet(f"{y!r} is not on the unstable set of {x!r}")
        if m == math.inf:
            return HolonomyResult(I, 0, 0.0, side, x, y)
    exact_ok = isinstance(spec, LocallyConstantCocycle)
    if method == "exact" and not exact_ok:
        raise ValueError("exact holonomies need a locally constant cocycle")
    lo, hi = spec.window if spec.window is not None else (0, 0)
    if side == "stable":
        k = max(0, m - lo)
    else:
        k = max(0, hi - m)
    if exact_ok and method != "limit":
        return _exact(spec, x, y, k, side)

    # push into the local set, compute there, conjugate back through A^j
    j = max(0, m) if side == "stable" else max(0, -m)
    sign = 1 if side == "stable" else -1
    x2, y2 = shift(x, sign * j), shift(y, sign * j)
    local = _limit(spec, x2, y2, tol, b, side, max(MIN_STEPS, k - j + 1))
    if j == 0:
        return HolonomyResult(local.matrix, local.n_used, local.error_bound, side, x, y)
    px = product(spec, x, sign * j)
    py = product(spec, y, sign * j)
    h = _adj(px.matrix) @ local.matrix @ py.matrix * math.exp(px.log_scale + py.log_scale)
    amp = math.exp(px.log_norm + py.log_norm)
    err = amp * local.error_bound + _rounding_floor(j, px, py)
    return HolonomyResult(h, local.n_used + j, err, side, x, y)


def stable_holonomy(spec: Cocycle, x: SymbolSequence, y: SymbolSequence, tol=1e-10, method="auto") -> HolonomyResult:
    """``H^s_{x<-y}`` with an operator-norm error bound."""
    return _holonomy(spec, x, y, tol, method, "stable")


def unstable_holonomy(spec: Cocycle, x: SymbolSequence, y: SymbolSequence, tol=1e-10, method="auto") -> HolonomyResult:
    """``H^u_{x<-y}`` with an operator-norm error bound."""
    return _holonomy(spec, x, y, tol, method, "unstable")


@dataclass(frozen=True)
class IdentityReport:
    side: str
    composition_residual: float
    intertwining_residual: float
    c0_sample: float | None
    budget: float
    passed: bool


def verify_identities(spec: Cocycle, x, y, z, tol=1e-10, side="stable", method="auto") -> IdentityReport:
    """Residuals of ``H_{x<-y} = H_{x<-z} H_{z<-y}`` and ``A(x) H_{x<-y} = H_{Tx<-Ty} A(y)``.

    Also reports ``||H_{x<-y} - I|| / d(x, y)^alpha`` as one sample of the
    Hoelder-type constant (``None`` when ``x == y``).
    """
    hol = stable_holonomy if side == "stable" else unstable_holonomy
    hxy = hol(spec, x, y, tol, method)
    hxz = hol(spec, x, z, tol, method)
    hzy = hol(spec, z, y, tol, method)
    comp = (hxy.matrix - hxz.matrix @ hzy.matrix).norm()
    htt = hol(spec, shift(x, 1), shift(y, 1), tol, method)
    ax, ay = spec.evaluate(x), spec.evaluate(y)
    inter = (ax @ hxy.matrix - htt.matrix @ ay).norm()
    d = distance(x, y)
    c0 = (hxy.matrix - I).norm() / d ** spec.alpha if d > 0.0 else None
    errs = (hxy.error_bound, hxz.error_bound, hzy.error_bound, htt.error_bound)
    scale = max(1.0, hxz.matrix.norm() * hzy.matrix.norm(), ax.norm() * hxy.matrix.norm())
    budget = tol + 2.0 * scale * sum(errs)
    return IdentityReport(side, comp, inter, c0, budget, comp <= budget and inter <= budget)
