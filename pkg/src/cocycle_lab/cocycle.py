"""Cocycles over subshifts of finite type and renormalized products along orbits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import NotSL2, WordNotInTable
from .sl2 import SL2_TOL, Mat2
from .symbolic import SymbolSequence, TransitionMatrix, admissible_words, full_shift, shift


class Cocycle:
    """Map ``A : X -> SL(2, R)`` over the subshift ``sft``.

    Subclasses set ``sft``, ``alpha`` (declared Hoelder exponent) and
    ``window`` (coordinate window ``(lo, hi)`` read by ``A``, or ``None`` when
    ``A`` depends on the whole sequence).
    """

    sft: TransitionMatrix
    alpha: float
    window: tuple | None

    def evaluate(self, x: SymbolSequence) -> Mat2:
        raise NotImplementedError

    def matrices(self, x: SymbolSequence, start: int, count: int) -> list:
        """``[A(T^k x) for k in range(start, start + count)]``."""
        return [self.evaluate(shift(x, k)) for k in range(start, start + count)]

    def sup_norm(self) -> float:
        raise NotImplementedError

    def holder_constant(self, alpha=None) -> float:
        raise NotImplementedError

    def probe_points(self, horizon: int) -> list:
        """Extra points worth probing for slow growth up to ``horizon`` steps (none by default)."""
        return []


@dataclass(frozen=True, eq=True)
class LocallyConstantCocycle(Cocycle):
    """``A(x) = table[(x_lo, ..., x_hi)]`` for the coordinate window ``(lo, hi)``."""

    sft: TransitionMatrix
    window: tuple
    table: Mapping
    alpha: float = 1.0

    def __post_init__(self):
        lo, hi = (int(v) for v in self.window)
        if not lo <= 0 <= hi:
            raise ValueError(f"window ({lo}, {hi}) must contain 0")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"Hoelder exponent {self.alpha} outside (0, 1]")
        table = {tuple(int(s) for s in w): m for w, m in dict(self.table).items()}
        expected = set(admissible_words(self.sft, hi - lo + 1))
        missing = expected - set(table)
        extra = set(table) - expected
        if missing or extra:
            raise WordNotInTable(
                f"table must cover exactly the admissible words of length {hi - lo + 1}; "
                f"missing {sorted(missing)[:4]}, unexpected {sorted(extra)[:4]}"
            )
        for w, m in table.items():
            if not isinstance(m, Mat2):
                m = Mat2(*m)
                table[w] = m
            if not m.is_sl2(SL2_TOL):
                raise NotSL2(f"entry {w} has determinant {m.det!r}")
        object.__setattr__(self, "window", (lo, hi))
        object.__setattr__(self, "table", dict(sorted(table.items())))

    __hash__ = None

    @property
    def is_one_step(self):
        return self.window == (0, 0)

    def evaluate(self, x):
        lo, hi = self.window
        w = x.window(lo, hi)
        try:
            return self.table[w]
        except KeyError:
            raise WordNotInTable(f"word {w} read at 0 is not in the table") from None

    def matrices(self, x, start, count):
        lo, hi = self.window
        width = hi - lo + 1
        coords = [x[n] for n in range(start + lo, start + count + hi)]
        table = self.table
        try:
            return [table[tuple(coords[k:k + width])] for k in range(count)]
        except KeyError as exc:
            raise WordNotInTable(f"word {exc.args[0]} is not in the table") from None

    def sup_norm(self):
        return max(m.norm() for m in self.table.values())

    def holder_constant(self, alpha=None):
        """Exact Hoelder constant of ``A`` for exponent ``alpha``.

        Two points at distance ``2^-N`` agree on ``|n| < N``; their matrices can
        only differ when the first disagreement ``N`` falls inside the window.
        """
        alpha = self.alpha if alpha is None else alpha
        lo, _ = self.window
        items = list(self.table.items())
        best = 0.0
        for i, (w, m) in enumerate(items):
            for v, n in items[i + 1:]:
                diff = (m - n).norm()
                if diff == 0.0:
                    continue
                radius = min(abs(k + lo) for k in range(len(w)) if w[k] != v[k])
                best = max(best, diff * 2.0 ** (alpha * radius))
        return best


def one_step(sft: TransitionMatrix, matrices: Mapping, alpha=1.0) -> LocallyConstantCocycle:
    """Cocycle with ``A(x)`` depending on ``x_0`` only."""
    return LocallyConstantCocycle(sft, (0, 0), {(s,): m for s, m in matrices.items()}, alpha)


def constant_cocycle(m: Mat2, sft: TransitionMatrix | None = None, alpha=1.0) -> LocallyConstantCocycle:
    sft = full_shift(2, 0) if sft is None else sft
    return one_step(sft, {s: m for s in sft.symbols}, alpha)


@dataclass(frozen=True)
class ProductResult:
    """``A^n(x) = exp(log_scale) * matrix`` with ``matrix`` kept near unit norm."""

    matrix: Mat2
    log_scale: float
    n: int

    @property
    def direction(self):
        return "forward" if self.n >= 0 else "backward"

    @property
    def log_norm(self):
        return self.log_scale + math.log(self.matrix.norm())

    def norm(self):
        return math.exp(self.log_norm)

    def true_matrix(self):
        return self.matrix * math.exp(self.log_scale)

    def __matmul__(self, other):
        """Compose ``self`` after ``other``; renormalizes the result."""
        return _renormalized(self.matrix @ other.matrix, self.log_scale + other.log_scale, self.n + other.n)


def _renormalized(m, s, n):
    nm = m.norm()
    if nm > 2.0 or nm < 0.5:
        m = m * (1.0 / nm)
        s += math.log(nm)
    return ProductResult(m, s, n)


def accumulate(steps, n=None) -> ProductResult:
    """Left-multiply the matrices of ``steps`` in order, renormalizing on the way."""
    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    s = 0.0
    count = 0
    for m in steps:
        a, b, c, d = (m.a * a + m.b * c, m.a * b + m.b * d, m.c * a + m.d * c, m.c * b + m.d * d)
        count += 1
        nm = 0.5 * (math.hypot(a + d, b - c) + math.hypot(a - d, b + c))
        if nm > 2.0 or nm < 0.5:
            inv = 1.0 / nm
            a, b, c, d = a * inv, b * inv, c * inv, d * inv
            s += math.log(nm)
    return ProductResult(Mat2(a, b, c, d), s, count if n is None else n)


def product(spec: Cocycle, x: SymbolSequence, n: int) -> ProductResult:
    """``A^n(x)``; for negative ``n`` this is ``A(T^n x)^-1 ... A(T^-1 x)^-1``."""
    if n >= 0:
        return accumulate(spec.matrices(x, 0, n), n)
    mats = spec.matrices(x, n, -n)
    return accumulate((m.inv() for m in reversed(mats)), n)


@dataclass(frozen=True)
class BunchingReport:
    bunched: bool
    margin: float
    alpha: float


def bunching_check(spec: Cocycle, alpha=None) -> BunchingReport:
    """``sup ||A(x)||^2 2^-alpha``; the cocycle is fiber-bunched when this is < 1."""
    alpha = spec.alpha if alpha is None else alpha
    margin = spec.sup_norm() ** 2 * 2.0 ** (-alpha)
    return BunchingReport(margin < 1.0, margin, alpha)


def holder_estimate(spec: Cocycle, alpha=None):
    """``(alpha, C)`` with ``||A(x) - A(y)|| <= C d(x, y)^alpha``."""
    alpha = spec.alpha if alpha is None else alpha
    return alpha, spec.holder_constant(alpha)


BUILTINS: dict[str, Callable[..., Cocycle]] = {}


def register_builtin(name):
    def deco(factory):
        BUILTINS[name] = factory
        return factory

    return deco


def make_builtin(name, **params) -> Cocycle:
    from . import counterexample  # noqa: F401  (registers the built-in cocycles)

    try:
        factory = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin cocycle {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(**params)


@dataclass(frozen=True)
class Recoding:
    """One-step recoding of a windowed cocycle over the shift on admissible windows."""

    spec: LocallyConstantCocycle
    source: LocallyConstantCocycle
    words: tuple

    def encode(self, x: SymbolSequence) -> SymbolSequence:
        lo, hi = self.source.window
        index = {w: i for i, w in enumerate(self.words)}
        L, R = len(x.left), len(x.right)
        a = x.core_start - hi - L
        b = x.core_end - lo + R

        def sym(n):
            return index[x.window(n + lo, n + hi)]

        return SymbolSequence(
            tuple(sym(n) for n in range(a - L, a)),
            tuple(sym(n) for n in range(a, b)),
            tuple(sym(n) for n in range(b, b + R)),
            a,
        )


def recode_one_step(spec: LocallyConstantCocycle) -> Recoding:
    """Higher-block presentation: symbols are the admissible windows ``(x_lo..x_hi)``."""
    lo, hi = spec.window
    words = tuple(admissible_words(spec.sft, hi - lo + 1))
    q = tuple(tuple(int(u[1:] == v[:-1]) for v in words) for u in words)
    sft = TransitionMatrix(q, 0)
    new = LocallyConstantCocycle(sft, (0, 0), {(i,): spec.table[w] for i, w in enumerate(words)}, spec.alpha)
    return Recoding(new, spec, words)
