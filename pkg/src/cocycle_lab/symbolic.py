"""Two-sided subshifts of finite type, restricted to eventually periodic points.

An eventually periodic sequence is stored as a left periodic tail, a finite
core starting at ``core_start`` and a right periodic tail. Construction always
normalizes (primitive tails, minimal core, canonical anchor), so two
instances are equal exactly when they represent the same bi-infinite sequence.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import inf, lcm
from typing import Iterator, Sequence

from .errors import (
    BracketUndefined,
    BudgetExceeded,
    InadmissibleSequence,
    NonAdmissibleAlphabet,
    NotIrreducible,
)

Word = tuple

DEFAULT_ORBIT_CAP = 200_000


def _primitive(word):
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def _rotr(word):
    return word[-1:] + word[:-1]


def _rotl(word):
    return word[1:] + word[:1]


def _normalize(left, core, right, start):
    if not left or not right:
        raise ValueError("periodic tails must be nonempty words")
    left, right = _primitive(left), _primitive(right)
    # let the right tail swallow matching core letters from the end
    while core and core[-1] == right[-1]:
        core = core[:-1]
        right = _rotr(right)
    if not core:
        while left != right and left[-1] == right[-1]:
            start -= 1
            left, right = _rotr(left), _rotr(right)
        if left == right:
            k = (-start) % len(right)
            w = right[k:] + right[:k]
            return w, (), w, 0
        return left, core, right, start
    while core and core[0] == left[0]:
        start += 1
        core = core[1:]
        left = _rotl(left)
    return left, core, right, start


@dataclass(frozen=True)
class SymbolSequence:
    """Eventually periodic bi-infinite sequence ``(..., x_-1 | x_0, x_1, ...)``.

    ``x_n`` is ``core[n - core_start]`` inside the core, ``right`` repeated
    after it and ``left`` repeated (ending at ``core_start - 1``) before it.
    """

    left: Word
    core: Word
    right: Word
    core_start: int = 0

    def __post_init__(self):
        parts = _normalize(
            tuple(int(s) for s in self.left),
            tuple(int(s) for s in self.core),
            tuple(int(s) for s in self.right),
            int(self.core_start),
        )
        for name, value in zip(("left", "core", "right", "core_start"), parts):
            object.__setattr__(self, name, value)

    @classmethod
    def periodic(cls, word, start=0):
        """The periodic point with ``x_{start+k} = word[k mod len(word)]``."""
        word = tuple(word)
        return cls(word, (), word, start)

    @classmethod
    def constant(cls, symbol):
        return cls((symbol,), (), (symbol,), 0)

    @property
    def core_end(self):
        """First index after the core."""
        return self.core_start + len(self.core)

    @property
    def is_periodic(self):
        return not self.core and self.left == self.right

    def __getitem__(self, n):
        s = self.core_start
        if n < s:
            return self.left[(n - s) % len(self.left)]
        i = n - s
        if i < len(self.core):
            return self.core[i]
        return self.right[(i - len(self.core)) % len(self.right)]

    def window(self, lo, hi):
        """Coordinates ``x_lo, ..., x_hi`` (inclusive)."""
        return tuple(self[n] for n in range(lo, hi + 1))

    def symbols(self):
        return set(self.left) | set(self.core) | set(self.right)

    def extent(self):
        """Index range outside of which both tails have settled in."""
        return self.core_start - len(self.left), self.core_end + len(self.right)

    def __repr__(self):
        def w(t):
            return "".join(map(str, t)) if all(0 <= s < 10 for s in t) else " ".join(map(str, t))

        return f"SymbolSequence(({w(self.left)})^ [{w(self.core)}]@{self.core_start} ({w(self.right)})^)"


def shift(x: SymbolSequence, n: int = 1) -> SymbolSequence:
    """``T^n x`` for the left shift ``T``; ``(T^n x)_k = x_{k+n}``."""
    if n == 0:
        return x
    return SymbolSequence(x.left, x.core, x.right, x.core_start - n)


def distance(x: SymbolSequence, y: SymbolSequence) -> float:
    """``2^{-N}`` with ``N`` the smallest ``|n|`` such that ``x_n != y_n``."""
    if x == y:
        return 0.0
    n = 0
    while True:
        if x[n] != y[n] or x[-n] != y[-n]:
            return 2.0 ** (-n)
        n += 1


def stable_index(x: SymbolSequence, y: SymbolSequence):
    """Smallest ``m`` with ``x_n == y_n`` for every ``n >= m``.

    Returns ``-inf`` when ``x == y`` and ``None`` when ``y`` is not on the
    stable set of ``x``.
    """
    if x == y:
        return -inf
    top = max(x.core_end, y.core_end)
    period = lcm(len(x.right), len(y.right))
    if any(x[n] != y[n] for n in range(top, top + period)):
        return None
    n = top - 1
    while x[n] == y[n]:
        n -= 1
    return n + 1


def unstable_index(x: SymbolSequence, y: SymbolSequence):
    """Largest ``m`` with ``x_n == y_n`` for every ``n <= m`` (mirror of ``stable_index``)."""
    if x == y:
        return inf
    bottom = min(x.core_start, y.core_start)
    period = lcm(len(x.left), len(y.left))
    if any(x[n] != y[n] for n in range(bottom - period, bottom)):
        return None
    n = bottom
    while x[n] == y[n]:
        n += 1
    return n - 1


def in_local_stable(y, x):
    """``y`` in ``W^s_loc(x)``: coordinates agree for ``n >= 0``."""
    m = stable_index(x, y)
    return m is not None and m <= 0


def in_local_unstable(y, x):
    """``y`` in ``W^u_loc(x)``: coordinates agree for ``n <= 0``."""
    m = unstable_index(x, y)
    return m is not None and m >= 0


def splice(past: SymbolSequence, future: SymbolSequence, cut: int = 0) -> SymbolSequence:
    """Sequence equal to ``past`` for ``n < cut`` and to ``future`` for ``n >= cut``."""
    lo = min(past.core_start, cut)
    hi = max(future.core_end, cut)
    L, R = len(past.left), len(future.right)
    left = tuple(past[lo - L + k] for k in range(L))
    core = tuple(past[n] for n in range(lo, cut)) + tuple(future[n] for n in range(cut, hi))
    right = tuple(future[hi + k] for k in range(R))
    return SymbolSequence(left, core, right, lo)


def bracket(p: SymbolSequence, x: SymbolSequence) -> SymbolSequence:
    """``[p, x]``: takes ``p`` on ``n <= 0`` and ``x`` on ``n >= 0``."""
    if p[0] != x[0]:
        raise BracketUndefined(f"p_0 = {p[0]} differs from x_0 = {x[0]}")
    return splice(p, x, 0)


@dataclass(frozen=True)
class TransitionMatrix:
    """0/1 transition matrix over the symbols ``base, ..., base + size - 1``."""

    q: tuple
    base: int = 1
    _m: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = tuple(tuple(int(v) for v in row) for row in self.q)
        n = len(q)
        if n == 0 or any(len(row) != n for row in q):
            raise NonAdmissibleAlphabet("transition matrix must be square and nonempty")
        if any(v not in (0, 1) for row in q for v in row):
            raise NonAdmissibleAlphabet("transition matrix entries must be 0 or 1")
        for i in range(n):
            if not any(q[i]):
                raise NonAdmissibleAlphabet(f"symbol {i + self.base} has no successor")
            if not any(q[j][i] for j in range(n)):
                raise NonAdmissibleAlphabet(f"symbol {i + self.base} has no predecessor")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "_m", tuple(self._bfs_lengths(i) for i in range(n)))

    def _bfs_lengths(self, i):
        n = len(self.q)
        dist = [None] * n
        frontier = deque()
        for j in range(n):
            if self.q[i][j]:
                dist[j] = 1
                frontier.append(j)
        while frontier:
            j = frontier.popleft()
            for k in range(n):
                if self.q[j][k] and dist[k] is None:
                    dist[k] = dist[j] + 1
                    frontier.append(k)
        return tuple(dist)

    @property
    def size(self):
        return len(self.q)

    @property
    def symbols(self):
        return range(self.base, self.base + self.size)

    def allowed(self, a, b):
        i, j = a - self.base, b - self.base
        return 0 <= i < self.size and 0 <= j < self.size and self.q[i][j] == 1

    def successors(self, a):
        return [b for b in self.symbols if self.allowed(a, b)]

    def predecessors(self, b):
        return [a for a in self.symbols if self.allowed(a, b)]

    def m(self, a, b):
        """Smallest ``m >= 1`` with ``(Q^m)_{ab} > 0``, or ``None``."""
        return self._m[a - self.base][b - self.base]

    @property
    def irreducible(self):
        return all(v is not None for row in self._m for v in row)

    @property
    def max_m(self):
        if not self.irreducible:
            return None
        return max(max(row) for row in self._m)

    def admits_word(self, word, cyclic=False):
        if any(not (self.base <= s < self.base + self.size) for s in word):
            return False
        pairs = zip(word, word[1:] + word[:1]) if cyclic else zip(word, word[1:])
        return all(self.allowed(a, b) for a, b in pairs)

    def admits(self, x: SymbolSequence):
        lo, hi = x.extent()
        return self.admits_word(x.window(lo - 1, hi + 1))

    def check(self, x: SymbolSequence):
        if not self.admits(x):
            raise InadmissibleSequence(f"{x!r} is not admissible")
        return x


def validate_sft(entries, base=1) -> TransitionMatrix:
    return TransitionMatrix(tuple(tuple(row) for row in entries), base)


def full_shift(size=2, base=0) -> TransitionMatrix:
    return TransitionMatrix(tuple((1,) * size for _ in range(size)), base)


def admissible_words(Q: TransitionMatrix, length):
    """All admissible words of the given length, in lexicographic order."""
    words = [(s,) for s in Q.symbols]
    for _ in range(length - 1):
        words = [w + (b,) for w in words for b in Q.successors(w[-1])]
    return words


def connecting_word(Q: TransitionMatrix, a, b):
    """Shortest ``(c_1, ..., c_{n1-1})`` with ``a -> c_1 -> ... -> b`` admissible.

    Returns ``(word, n1)``.
    """
    if not Q.irreducible:
        raise NotIrreducible("connecting words need an irreducible transition matrix")
    parent = {}
    frontier = deque()
    for c in Q.successors(a):
        if c == b:
            return (), 1
        if c not in parent:
            parent[c] = None
            frontier.append(c)
    while frontier:
        c = frontier.popleft()
        for d in Q.successors(c):
            if d == b:
                path = [c]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                word = tuple(reversed(path))
                return word, len(word) + 1
            if d not in parent:
                parent[d] = c
                frontier.append(d)
    raise NotIrreducible(f"no path from {a} to {b}")  # pragma: no cover


def _is_lyndon(w):
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def min_rotation(word):
    word = tuple(word)
    return min(word[i:] + word[:i] for i in range(len(word))) if word else word


@dataclass(frozen=True)
class PeriodicOrbit:
    """Orbit of a periodic point, keyed by the minimal rotation of its primitive word."""

    word: Word

    def __post_init__(self):
        w = tuple(int(s) for s in self.word)
        if not w:
            raise ValueError("periodic word must be nonempty")
        object.__setattr__(self, "word", min_rotation(_primitive(w)))

    @property
    def period(self):
        return len(self.word)

    @property
    def base_point(self):
        return SymbolSequence.periodic(self.word)

    def points(self):
        return [shift(self.base_point, k) for k in range(self.period)]

    def __repr__(self):
        return f"PeriodicOrbit({''.join(map(str, self.word)) if max(self.word) < 10 else self.word})"


def enumerate_periodic(Q: TransitionMatrix, max_period, cap=DEFAULT_ORBIT_CAP):
    """Every periodic orbit of least period ``<= max_period``, ordered by (period, word)."""
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    found = []

    def extend(w):
        if len(w) > max_period:
            return
        if Q.allowed(w[-1], w[0]) and _is_lyndon(w):
            found.append(w)
            if len(found) > cap:
                raise BudgetExceeded(f"more than {cap} periodic orbits")
        if len(w) < max_period:
            for b in Q.successors(w[-1]):
                if b >= w[0]:
                    extend(w + (b,))

    for s in Q.symbols:
        extend((s,))
    found.sort(key=lambda w: (len(w), w))
    return [PeriodicOrbit(w) for w in found]


def iter_orbit_points(orbits) -> Iterator[SymbolSequence]:
    for orbit in orbits:
        yield from orbit.points()


def from_word(word: Sequence[int], start=0, fill_left=None, fill_right=None):
    """Finite word placed at ``start`` with constant tails (defaults: its end letters)."""
    word = tuple(word)
    left = (word[0] if fill_left is None else fill_left,)
    right = (word[-1] if fill_right is None else fill_right,)
    return SymbolSequence(left, word, right, start)
