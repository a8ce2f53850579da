"""Lyapunov exponents: exact on periodic orbits, finite-time, and Monte Carlo sampled."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cocycle import Cocycle, ProductResult, accumulate, product
from .errors import NotIrreducible
from .symbolic import (
    PeriodicOrbit,
    SymbolSequence,
    TransitionMatrix,
    connecting_word,
    enumerate_periodic,
)

LOG2 = math.log(2.0)
PARABOLIC_TOL = 1e-12
DOMINATION_TOL = 1e-9


def _threads():
    try:
        return max(1, int(os.environ.get("COCYCLE_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    n = _threads()
    if n == 1 or len(items) < 64:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ExponentReport:
    lambda_plus: float
    lambda_minus: float
    method: str
    n: int
    trials: int | None = None
    spread: float | None = None
    samples: tuple = field(default=(), repr=False)


def spectral_exponent(p: ProductResult) -> float:
    """``log`` of the spectral radius of ``exp(log_scale) * matrix``.

    The SL(2) case with ``|trace| <= 2`` (elliptic or parabolic) returns 0.
    """
    m, s = p.matrix, p.log_scale
    t = abs(m.trace)
    det = m.det
    if t == 0.0 or math.log(t) + s <= math.log(2.0) + PARABOLIC_TOL:
        if abs(math.log(abs(det)) + 2.0 * s) <= 1e-8 if det != 0.0 else False:
            return 0.0
    disc = t * t - 4.0 * det
    if disc < 0.0:
        return s + 0.5 * math.log(det)
    return s + math.log(0.5 * (t + math.sqrt(disc)))


def periodic_exponent(spec: Cocycle, orbit) -> ExponentReport:
    """Exact top exponent of a periodic orbit from the eigenvalues of ``A^per(p)``."""
    if isinstance(orbit, PeriodicOrbit):
        point, per = orbit.base_point, orbit.period
    else:
        point, per = orbit
    lam = spectral_exponent(product(spec, point, per)) / per
    lam = max(lam, 0.0) if abs(lam) < 1e-15 else lam
    return ExponentReport(lam, -lam, "periodic-exact", per)


def finite_time_exponent(spec: Cocycle, x: SymbolSequence, n: int) -> float:
    """``(1/n) log ||A^n(x)||``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return product(spec, x, n).log_norm / n


@dataclass(frozen=True)
class GapScanReport:
    max_period: int
    tau: float
    orbits: tuple
    exponents: tuple
    min_lambda: float
    min_gap: float
    verdict: str
    witness: PeriodicOrbit | None

    @property
    def holds(self):
        return self.verdict == "gap-holds"

    def rows(self):
        return [(o.period, o.word, lam) for o, lam in zip(self.orbits, self.exponents)]


def gap_scan(spec: Cocycle, max_period: int, tau: float, cap=None) -> GapScanReport:
    """Exact exponents of every periodic orbit up to ``max_period`` against threshold ``tau``."""
    if not spec.sft.irreducible:
        raise NotIrreducible("gap scans need an irreducible base")
    kwargs = {} if cap is None else {"cap": cap}
    orbits = enumerate_periodic(spec.sft, max_period, **kwargs)
    lams = _pmap(lambda o: periodic_exponent(spec, o).lambda_plus, orbits)
    witness = next((o for o, lam in zip(orbits, lams) if lam < tau), None)
    lo = min(lams)
    return GapScanReport(
        max_period,
        tau,
        tuple(orbits),
        tuple(lams),
        lo,
        2.0 * lo,
        "gap-holds" if witness is None else "violated",
        witness,
    )


def _transition_probs(sft: TransitionMatrix, weights):
    """Row-stochastic matrix (by symbol offset) for Bernoulli or Markov weights."""
    w = np.asarray(weights, dtype=float)
    q = np.asarray(sft.q, dtype=float)
    if w.ndim == 1:
        if w.shape[0] != sft.size or np.any(w < 0) or not np.isclose(w.sum(), 1.0):
            raise ValueError("Bernoulli weights must be a probability vector over the alphabet")
        p = q * w[None, :]
        init = w
    else:
        if w.shape != q.shape or np.any(w < 0):
            raise ValueError("Markov weights must be a nonnegative matrix of the alphabet size")
        if np.any((w > 0) & (q == 0)):
            raise ValueError("Markov weights put mass on forbidden transitions")
        p = w.copy()
        init = None
    rows = p.sum(axis=1)
    if np.any(rows <= 0):
        raise ValueError("weights leave some symbol without an allowed successor")
    p /= rows[:, None]
    if init is None:
        vals, vecs = np.linalg.eig(p.T)
        init = np.real(vecs[:, np.argmin(np.abs(vals - 1.0))])
        init = np.abs(init) / np.abs(init).sum()
    return init, p


def _random_cycle(sft, rng, symbol, p, max_walk=3):
    """Random admissible cyclic word starting with ``symbol``."""
    word = [symbol]
    for _ in range(int(rng.integers(0, max_walk + 1))):
        i = word[-1] - sft.base
        word.append(int(rng.choice(sft.size, p=p[i])) + sft.base)
    back, _ = connecting_word(sft, word[-1], symbol)
    return tuple(word) + back


def sample_point(sft: TransitionMatrix, rng, core_length, weights=None, core_start=0):
    """Eventually periodic point whose core is a Markov path of the given length.

    Tails are short random cycles glued admissibly onto both ends of the core.
    """
    if weights is None:
        weights = np.full(sft.size, 1.0 / sft.size)
    init, p = _transition_probs(sft, weights)
    path = [int(rng.choice(sft.size, p=init))]
    for _ in range(core_length - 1):
        path.append(int(rng.choice(sft.size, p=p[path[-1]])))
    core = tuple(s + sft.base for s in path)
    left = _random_cycle(sft, rng, core[0], p)  # left[-1] -> core[0] closes the cycle
    c = _random_cycle(sft, rng, core[-1], p)
    right = c[1:] + c[:1]
    return SymbolSequence(left, core, right, core_start)


def sampled_exponent(spec: Cocycle, weights, n: int, trials: int, rng_seed=0) -> ExponentReport:
    """Finite-time exponents at horizon ``n`` over independently sampled points."""
    rng = np.random.default_rng(rng_seed)
    radius = 0
    if spec.window is not None:
        radius = max(-spec.window[0], spec.window[1])
    vals = []
    for _ in range(trials):
        x = sample_point(spec.sft, rng, n + 2 * radius + 2, weights, core_start=-radius - 1)
        vals.append(finite_time_exponent(spec, x, n))
    arr = np.asarray(vals)
    mean = float(arr.mean())
    spread = float(arr.std(ddof=1)) if trials > 1 else 0.0
    return ExponentReport(mean, -mean, "sampled", n, trials, spread, tuple(vals))


@dataclass(frozen=True)
class DominationReport:
    C_fit: float
    tau_fit: float
    passed: bool
    max_residual: float
    window: tuple


def domination_test(spec: Cocycle, samples, n_max: int, slack=2.0) -> DominationReport:
    """Fit ``sigma_2/sigma_1 (A^n(x)) <= C tau^n`` over samples and ``n in [n_max/2, n_max]``.

    The line is fitted to the upper envelope (worst sample at each ``n``) in
    log scale; the test passes when the slope gives ``tau < 1`` and no sample
    rises more than ``slack`` (natural-log units) above the line. ``C_fit`` is
    the smallest constant for which every observed ratio lies under ``C tau^n``.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    samples = list(samples)
    lo = max(1, n_max // 2)
    ns = np.arange(lo, n_max + 1)
    table = np.empty((len(samples), len(ns)))
    for i, x in enumerate(samples):
        head = spec.matrices(x, 0, lo - 1)
        p = accumulate(head)
        # det of the renormalized product cancels badly; track it factor by factor
        log_det = sum(math.log(abs(m.det)) for m in head)
        for j, m in enumerate(spec.matrices(x, lo - 1, len(ns))):
            p = accumulate([m]) @ p
            log_det += math.log(abs(m.det))
            table[i, j] = log_det - 2.0 * p.log_norm
    envelope = table.max(axis=0)
    slope, intercept = np.polyfit(ns.astype(float), envelope, 1)
    resid = table - (intercept + slope * ns)[None, :]
    max_res = float(resid.max())
    tau = float(math.exp(slope))
    C = float(math.exp(intercept + max(max_res, 0.0)))
    return DominationReport(C, tau, bool(tau < 1.0 - DOMINATION_TOL and max_res <= slack), max_res, (int(lo), int(n_max)))
