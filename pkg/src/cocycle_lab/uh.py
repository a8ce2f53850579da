"""Certify or falsify uniform hyperbolicity of SL(2) cocycles.

Falsification looks for points whose products grow slower than ``e^(tau n)/2``.
Certification builds one unstable and one stable cone per symbol for a
one-step cocycle and checks strict invariance plus uniform expansion over
all admissible words of some length ``L``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cocycle import Cocycle, LocallyConstantCocycle, accumulate, product, recode_one_step
from .errors import BudgetExceeded, DegenerateSingularGap, NotIrreducible, NotOneStep
from .sl2 import (
    Mat2,
    ProjectiveArc,
    angle_dist,
    arc_image,
    hull,
    inclusion_margin,
    min_growth_on_arc,
    direction,
    svd2,
    unit,
)
from .symbolic import SymbolSequence, enumerate_periodic, iter_orbit_points, shift

INCLUSION_MARGIN = 1e-6
GROWTH_THRESHOLD = 1.0 + 1e-6
MAX_WORD_LENGTH = 12
PATH_BUDGET = 2_000_000
PROBE_PERIOD = 6
GAP_TOL = 1e-6


@dataclass(frozen=True)
class Witness:
    x: SymbolSequence
    n: int
    norm: float


@dataclass(frozen=True)
class ConePass:
    """Cones for one direction of time, keyed by symbol, with their growth data."""

    arcs: dict
    edges: tuple
    word_length: int
    growth: tuple  # m_r for r = 0..L
    c: float
    tau: float

    def min_margin(self):
        return min(inclusion_margin(self.arcs[b], arc_image(m, self.arcs[a])) for a, b, m in self.edges)


@dataclass(frozen=True)
class ConeCertificate:
    unstable: ConePass
    stable: ConePass
    margin: float
    threshold: float
    c: float
    tau: float
    recoded: bool = False

    def revalidate(self) -> bool:
        """Replay every stored inclusion and growth check."""
        for cp in (self.unstable, self.stable):
            if cp.min_margin() < self.margin:
                return False
            growth = _word_growth(cp.arcs, cp.edges, cp.word_length, PATH_BUDGET)
            if growth[cp.word_length] < self.threshold:
                return False
        for s in self.unstable.arcs:
            u, v = self.unstable.arcs[s], self.stable.arcs[s]
            if angle_dist(u.center, v.center) <= u.half_width + v.half_width:
                return False
        return True


@dataclass(frozen=True)
class UHVerdict:
    status: str
    certificate: ConeCertificate | None = None
    witness: Witness | None = None
    horizon: int | None = None
    tau_probe: float | None = None
    notes: tuple = field(default=())


# -- falsification --------------------------------------------------------------------------


def probe_samples(spec: Cocycle, points=(), max_period=PROBE_PERIOD):
    """Every point of every periodic orbit up to ``max_period``, then the user points."""
    out = list(iter_orbit_points(enumerate_periodic(spec.sft, max_period))) if max_period > 0 else []
    out.extend(points)
    return out


def norm_growth_probe(spec: Cocycle, x_samples=(), n_max=40, tau_probe=0.1, max_period=PROBE_PERIOD) -> UHVerdict:
    """Search for ``||A^n(x)|| <= e^(tau n) / 2`` with ``n <= n_max``.

    A hit violates the growth bound ``c e^(tau n)`` for every ``c >= 1/2`` and
    is reported as a witness (smallest ``n``, then sample order). No hit
    proves nothing, so the verdict is then inconclusive.
    """
    if not tau_probe > 0.0:
        raise ValueError("tau_probe must be positive")
    samples = probe_samples(spec, x_samples, max_period)
    if not samples:
        raise ValueError("the probe needs at least one sample point")
    states = [product(spec, x, 0) for x in samples]
    cut = math.log(0.5)
    for n in range(1, n_max + 1):
        for i, x in enumerate(samples):
            states[i] = accumulate(spec.matrices(x, n - 1, 1)) @ states[i]
            ln = states[i].log_norm
            if ln <= tau_probe * n + cut + 1e-12:
                return UHVerdict(
                    "falsified", witness=Witness(x, n, math.exp(ln)), horizon=n_max, tau_probe=tau_probe,
                    notes=(f"||A^n(x)|| <= e^(tau n)/2 rules out c >= 1/2 at tau = {tau_probe}",),
                )
    return UHVerdict("inconclusive", horizon=n_max, tau_probe=tau_probe,
                     notes=(f"no slow point among {len(samples)} samples up to n = {n_max}",))


# -- cone certification ---------------------------------------------------------------------


def _iterate_cones(nodes, edges, refine_steps):
    """Push arcs along edges and take hulls, starting from quarter cones around expanded directions."""
    out = {}
    for a, _, m in edges:
        if a not in out:
            out[a] = ProjectiveArc(svd2(m).expanding, 0.25 * math.pi)
    arcs = out
    for _ in range(refine_steps):
        incoming = {b: [] for b in nodes}
        for a, b, m in edges:
            incoming[b].append(arc_image(m, arcs[a]))
        arcs = {b: hull(incoming[b]) for b in nodes}
        if any(a.is_full for a in arcs.values()):
            return None
    return arcs


def _dilate_until_invariant(arcs, edges, margin):
    delta = 1e-6
    while delta < 0.25 * math.pi:
        cand = {s: a.dilate(delta) for s, a in arcs.items()}
        if not any(a.is_full for a in cand.values()):
            if all(inclusion_margin(cand[b], arc_image(m, cand[a])) >= margin for a, b, m in edges):
                return cand
        delta *= 2.0
    return None


def _word_growth(arcs, edges, length, budget):
    """``m_r`` = min over admissible paths of length ``r`` of the least growth on the starting cone."""
    out_edges = {}
    for a, b, m in edges:
        out_edges.setdefault(a, []).append((b, m))
    level = [(a, a, Mat2.identity()) for a in arcs]
    growth = [1.0]
    for _ in range(length):
        nxt = []
        for start, last, p in level:
            for b, m in out_edges[last]:
                nxt.append((start, b, m @ p))
        if len(nxt) > budget:
            raise BudgetExceeded(f"more than {budget} admissible paths")
        level = nxt
        growth.append(min(min_growth_on_arc(p, arcs[s]) for s, _, p in level))
    return growth


def _cone_pass(nodes, edges, refine_steps, margin, threshold, max_len):
    arcs = _iterate_cones(nodes, edges, refine_steps)
    if arcs is None:
        return None, "cone hull wraps the projective line"
    arcs = _dilate_until_invariant(arcs, edges, margin)
    if arcs is None:
        return None, "no strictly invariant cone family found"
    try:
        growth = _word_growth(arcs, edges, max_len, PATH_BUDGET)
    except BudgetExceeded as exc:
        return None, str(exc)
    for L in range(1, max_len + 1):
        if growth[L] >= threshold:
            tau = math.log(growth[L]) / L
            c = min(growth[r] * math.exp(-tau * r) for r in range(L))
            return ConePass(arcs, tuple(edges), L, tuple(growth[: L + 1]), c, tau), None
    return None, f"cone growth below {threshold} for every word length up to {max_len}"


def cone_certify(spec: LocallyConstantCocycle, refine_steps=40, margin=INCLUSION_MARGIN,
                 threshold=GROWTH_THRESHOLD, max_word_length=MAX_WORD_LENGTH) -> UHVerdict:
    """Invariant cone certificate for a one-step cocycle, or an inconclusive verdict."""
    if not isinstance(spec, LocallyConstantCocycle) or not spec.is_one_step:
        raise NotOneStep("cone certification needs a one-step cocycle; recode wider windows first")
    sft = spec.sft
    if not sft.irreducible:
        raise NotIrreducible("cone certification needs an irreducible base")
    nodes = list(sft.symbols)
    mat = {s: spec.table[(s,)] for s in nodes}
    fwd = [(a, b, mat[a]) for a in nodes for b in sft.successors(a)]
    bwd = [(b, a, mat[a].inv()) for a in nodes for b in sft.successors(a)]
    unstable, why = _cone_pass(nodes, fwd, refine_steps, margin, threshold, max_word_length)
    if unstable is None:
        return UHVerdict("inconclusive", horizon=max_word_length, notes=("unstable cones: " + why,))
    stable, why = _cone_pass(nodes, bwd, refine_steps, margin, threshold, max_word_length)
    if stable is None:
        return UHVerdict("inconclusive", horizon=max_word_length, notes=("stable cones: " + why,))
    for s in nodes:
        u, v = unstable.arcs[s], stable.arcs[s]
        if angle_dist(u.center, v.center) <= u.half_width + v.half_width:
            return UHVerdict("inconclusive", horizon=max_word_length, notes=(f"cones at symbol {s} overlap",))
    cert = ConeCertificate(unstable, stable, margin, threshold, min(unstable.c, stable.c), min(unstable.tau, stable.tau))
    return UHVerdict("certified", certificate=cert, horizon=max_word_length,
                     notes=(f"||A^n(x)|| >= c e^(tau n) with c = {cert.c:.6g}, tau = {cert.tau:.6g}",))


def certify(spec: Cocycle, x_samples=(), n_max=40, tau_probe=0.1, max_period=PROBE_PERIOD, **cone_options) -> UHVerdict:
    """Probe first, then cones when the cocycle is locally constant (recoded to one step if needed)."""
    probe = norm_growth_probe(spec, x_samples, n_max, tau_probe, max_period)
    cone = None
    if isinstance(spec, LocallyConstantCocycle) and spec.sft.irreducible:
        if spec.is_one_step:
            cone = cone_certify(spec, **cone_options)
        else:
            cone = cone_certify(recode_one_step(spec).spec, **cone_options)
            if cone.certificate is not None:
                c = cone.certificate
                cone = UHVerdict("certified", ConeCertificate(c.unstable, c.stable, c.margin, c.threshold, c.c, c.tau, True),
                                 horizon=cone.horizon, notes=cone.notes + ("certified on the one-step recoding",))
    if probe.status == "falsified":
        if cone is not None and cone.status == "certified":
            raise AssertionError("probe and cone certificate disagree; numerical tolerances are inconsistent")
        return probe
    if cone is not None and cone.status == "certified":
        return UHVerdict("certified", cone.certificate, horizon=cone.horizon, tau_probe=tau_probe,
                         notes=cone.notes + probe.notes)
    notes = probe.notes + (cone.notes if cone is not None else ("cone certification not available for this cocycle",))
    return UHVerdict("inconclusive", horizon=n_max, tau_probe=tau_probe, notes=notes)


# -- invariant directions -------------------------------------------------------------------


def extract_directions(spec: Cocycle, x: SymbolSequence, n: int):
    """Approximate ``(E^s_x, E^u_x)`` as angles mod pi.

    ``E^s`` is the most contracted right singular direction of ``A^n(x)`` and
    ``E^u`` the most contracted right singular direction of ``A^-n(x)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for p in (product(spec, x, n), product(spec, x, -n)):
        s = svd2(p.matrix)
        if s.s1 < (1.0 + GAP_TOL) * s.s2:
            raise DegenerateSingularGap(f"sigma1/sigma2 = {s.s1 / s.s2:.12g} at n = {p.n}")
        out.append(s.contracting)
    return out[0], out[1]


def equivariance_residual(spec: Cocycle, x: SymbolSequence, n: int) -> float:
    """Angle between ``A(x) E^s(x, n)`` and ``E^s(Tx, n)``."""
    es, _ = extract_directions(spec, x, n)
    es_next, _ = extract_directions(spec, shift(x, 1), n)
    return angle_dist(direction(spec.evaluate(x) @ unit(es)), es_next)


__all__ = [
    "ConeCertificate",
    "ConePass",
    "UHVerdict",
    "Witness",
    "certify",
    "cone_certify",
    "equivariance_residual",
    "extract_directions",
    "norm_growth_probe",
    "probe_samples",
]
