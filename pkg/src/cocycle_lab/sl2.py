"""2x2 real matrices, closed-form singular values, and the projective action on cones.

Directions are angles taken mod pi. A cone is stored as a :class:`ProjectiveArc`,
the open set of directions within ``half_width`` of ``center``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateMatrix, NotSL2

PI = math.pi
HALF_PI = 0.5 * math.pi
SL2_TOL = 1e-9
EPS_ARC = 1e-9
DEGENERATE_DET = 1e-14


class Mat2:
    """Immutable 2x2 real matrix ``[[a, b], [c, d]]``."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        self.d = float(d)

    @classmethod
    def sl2(cls, a, b, c, d, tol=SL2_TOL):
        m = cls(a, b, c, d)
        if not abs(m.det - 1.0) <= tol:
            raise NotSL2(f"determinant {m.det!r} is not 1 within {tol}")
        return m

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=float)
        return cls(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1])

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diag(cls, p, q):
        return cls(p, 0.0, 0.0, q)

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    def __eq__(self, other):
        return isinstance(other, Mat2) and tuple(self) == tuple(other)

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self):
        return f"Mat2({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def is_sl2(self, tol=SL2_TOL):
        return abs(self.det - 1.0) <= tol

    def __matmul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(
                self.a * o.a + self.b * o.c,
                self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c,
                self.c * o.b + self.d * o.d,
            )
        x, y = o
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def __add__(self, o):
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __mul__(self, s):
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    __rmul__ = __mul__

    def inv(self):
        det = self.det
        if det == 0.0:
            raise DegenerateMatrix("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def transpose(self):
        return Mat2(self.a, self.c, self.b, self.d)

    def norm(self):
        """Operator norm induced by the Euclidean norm (largest singular value)."""
        return 0.5 * (math.hypot(self.a + self.d, self.b - self.c) + math.hypot(self.a - self.d, self.b + self.c))

    def conorm(self):
        """``inf_{|v|=1} |Mv|``, the smallest singular value."""
        s1 = self.norm()
        return abs(self.det) / s1 if s1 > 0.0 else 0.0

    def fro(self):
        return math.sqrt(self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d)

    def to_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def eigenvalues(self):
        t, det = self.trace, self.det
        disc = t * t - 4.0 * det
        if disc >= 0.0:
            r = math.sqrt(disc)
            big = 0.5 * (t + math.copysign(r, t)) if t != 0.0 else 0.5 * r
            small = det / big if big != 0.0 else -big
            return (big, small)
        r = math.sqrt(-disc)
        return (complex(0.5 * t, 0.5 * r), complex(0.5 * t, -0.5 * r))


I = Mat2.identity()


class SVD2(NamedTuple):
    s1: float
    s2: float
    expanding: float
    contracting: float


def svd2(m: Mat2) -> SVD2:
    """Singular values and right singular directions (angles mod pi)."""
    s1 = m.norm()
    if s1 == 0.0:
        raise DegenerateMatrix("zero matrix has no singular directions")
    s2 = abs(m.det) / s1
    p = m.a * m.a + m.c * m.c
    r = m.b * m.b + m.d * m.d
    q = m.a * m.b + m.c * m.d
    phi = mod_pi(0.5 * math.atan2(2.0 * q, p - r))
    return SVD2(s1, s2, phi, mod_pi(phi + HALF_PI))


def rotation(theta) -> Mat2:
    """Counterclockwise rotation by ``theta``; exact at multiples of pi/2."""
    k = round(theta / HALF_PI)
    if k * HALF_PI == theta:
        c, s = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k % 4]
    else:
        c, s = math.cos(theta), math.sin(theta)
    return Mat2(c, -s, s, c)


def mod_pi(t):
    t = math.fmod(t, PI)
    if t < 0.0:
        t += PI
    if t >= PI:
        t -= PI
    return t


def angle_dist(s, t):
    """Distance between two directions on the projective line, in [0, pi/2]."""
    u = mod_pi(s - t)
    return min(u, PI - u)


def direction(v):
    return mod_pi(math.atan2(v[1], v[0]))


def unit(t):
    return (math.cos(t), math.sin(t))


@dataclass(frozen=True)
class ProjectiveArc:
    """Open arc of directions ``{t : angle_dist(t, center) < half_width}``."""

    center: float
    half_width: float

    def __post_init__(self):
        h = float(self.half_width)
        if not h > 0.0:
            raise ValueError("arc half-width must be positive")
        if h >= HALF_PI:
            h = HALF_PI
            c = 0.0
        else:
            c = mod_pi(float(self.center))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_width", h)

    @classmethod
    def full(cls):
        return cls(0.0, HALF_PI)

    @classmethod
    def from_endpoints(cls, start, width):
        """Arc swept counterclockwise from ``start`` through ``width`` radians."""
        return cls(start + 0.5 * width, 0.5 * width)

    @property
    def is_full(self):
        return self.half_width >= HALF_PI

    @property
    def start(self):
        return mod_pi(self.center - self.half_width)

    @property
    def end(self):
        return mod_pi(self.center + self.half_width)

    def contains_direction(self, t, closed=False):
        if self.is_full:
            return True
        d = angle_dist(t, self.center)
        return d <= self.half_width if closed else d < self.half_width

    def dilate(self, delta):
        return ProjectiveArc(self.center, min(HALF_PI, self.half_width + delta))


def _ccw(u, v):
    """Counterclockwise angle from direction of ``u`` to direction of ``v``, in [0, pi)."""
    return mod_pi(math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]))


def arc_image(m: Mat2, arc: ProjectiveArc, rigorous=False, slack=EPS_ARC) -> ProjectiveArc:
    """Image of the direction set ``arc`` under ``v -> Mv``.

    An invertible matrix acts on the projective line as a homeomorphism, so
    the image of an arc is the arc between the images of its endpoints.
    """
    det = m.det
    if abs(det) < DEGENERATE_DET:
        raise DegenerateMatrix(f"|det| = {abs(det)!r} too small for the projective action")
    if arc.is_full:
        return arc
    c, h = arc.center, arc.half_width
    u1 = m @ unit(c - h)
    u2 = m @ unit(c + h)
    if det < 0.0:
        u1, u2 = u2, u1
    width = _ccw(u1, u2)
    # a sweep that misses the image of the center has wrapped past pi under rounding
    if _ccw(u1, m @ unit(c)) > width:
        width = PI
    width = max(width, 1e-300)
    out = ProjectiveArc.from_endpoints(direction(u1), width)
    if rigorous:
        out = out.dilate(slack)
    return out


def inclusion_margin(outer: ProjectiveArc, inner: ProjectiveArc) -> float:
    """Largest ``delta`` such that ``inner`` dilated by ``delta`` still sits in ``outer``.

    Negative when ``inner`` is not contained; ``inf`` for a full outer arc.
    """
    if outer.is_full:
        return math.inf
    if inner.is_full:
        return -math.inf
    return outer.half_width - angle_dist(outer.center, inner.center) - inner.half_width


def arc_contains(outer: ProjectiveArc, inner: ProjectiveArc, margin=0.0) -> bool:
    if margin < 0.0:
        raise ValueError("margin must be nonnegative")
    if outer.is_full:
        return True
    if inner.is_full or inner.half_width + margin >= HALF_PI:
        return False
    return inclusion_margin(outer, inner) >= margin


def min_growth_on_arc(m: Mat2, arc: ProjectiveArc) -> float:
    """``inf |Mv|`` over unit vectors ``v`` whose direction lies in ``arc``.

    ``|Mv|^2 = s2^2 + (s1^2 - s2^2) sin^2(delta)`` where ``delta`` is the angle
    from ``v`` to the most contracted direction, so the infimum sits at the
    closest point of the arc to that direction.
    """
    s1, s2, _, contracting = svd2(m)
    if arc.is_full:
        return s2
    gap = max(0.0, angle_dist(contracting, arc.center) - arc.half_width)
    sn = math.sin(gap)
    return math.sqrt(s2 * s2 + (s1 - s2) * (s1 + s2) * sn * sn)


def hull(arcs, margin=0.0) -> ProjectiveArc:
    """Smallest arc containing every arc in ``arcs``; full line when the union wraps."""
    arcs = list(arcs)
    if not arcs:
        raise ValueError("hull of no arcs")
    if any(a.is_full for a in arcs):
        return ProjectiveArc.full()
    ivs = sorted((a.start, a.start + 2.0 * a.half_width) for a in arcs)
    merged = []
    for s, e in ivs:
        if merged and s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    while len(merged) > 1 and merged[-1][1] >= merged[0][0] + PI:
        first = merged.pop(0)
        merged[-1][1] = max(merged[-1][1], first[1] + PI)
    if len(merged) == 1:
        s, e = merged[0]
        width = e - s
    else:
        gaps = [merged[i + 1][0] - merged[i][1] for i in range(len(merged) - 1)]
        gaps.append(merged[0][0] + PI - merged[-1][1])
        j = max(range(len(gaps)), key=gaps.__getitem__)
        s = merged[(j + 1) % len(merged)][0]
        width = PI - gaps[j]
    if width >= PI - margin:
        return ProjectiveArc.full()
    return ProjectiveArc.from_endpoints(s, max(width, 1e-300))
