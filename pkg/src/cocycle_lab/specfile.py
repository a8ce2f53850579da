"""Plain-text cocycle description files.

A file has up to three sections::

    [sft]
    size = 2
    base = 0            # first symbol (default 1)
    row = 1 1
    row = 1 1

    [cocycle]
    kind = locally-constant
    window = -1 1
    alpha = 0.5
    0 0 1 = 1 0 0 1     # word = a11 a12 a21 a22
    fill = 1 0 0 1      # optional: matrix for every word not listed

    [builtin]
    name = diag-rotation
    k0 = 13
    alpha = 0.125

A builtin file needs only the ``[builtin]`` header and its name; the base
defaults to the full 2-shift on ``{0, 1}``. Repeated ``row`` keys are the
reason this is not an INI file.
"""
from __future__ import annotations

import hashlib
import re

from .cocycle import Cocycle, LocallyConstantCocycle, make_builtin
from .errors import CocycleLabError, NotSL2, SpecParseError, WordNotInTable
from .sl2 import SL2_TOL, Mat2
from .symbolic import SymbolSequence, TransitionMatrix, admissible_words

SECTIONS = {
    "sft": {"size", "base", "row"},
    "cocycle": {"kind", "window", "alpha", "fill"},
    "builtin": {"name", "k0", "alpha"},
}
KINDS = {"locally-constant", "builtin"}
_WORD = re.compile(r"^-?\d+(\s+-?\d+)*$")


def _strip(line):
    return line.split("#", 1)[0].strip()


def _ints(text, lineno, what):
    try:
        return [int(t) for t in text.split()]
    except ValueError:
        raise SpecParseError(f"{what} must be integers, got {text!r}", lineno) from None


def _floats(text, lineno, what, count=None):
    try:
        vals = [float(t) for t in text.split()]
    except ValueError:
        raise SpecParseError(f"{what} must be numbers, got {text!r}", lineno) from None
    if count is not None and len(vals) != count:
        raise SpecParseError(f"{what} needs {count} numbers, got {len(vals)}", lineno)
    return vals


def parse_spec(text: str) -> Cocycle:
    """Parse a spec file body into a cocycle. Errors carry the offending line number."""
    section = None
    seen = {}
    rows, entries = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SpecParseError(f"malformed section header {line!r}", lineno)
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise SpecParseError(f"unknown section [{section}]", lineno)
            if section in seen:
                raise SpecParseError(f"section [{section}] appears twice", lineno)
            seen[section] = {}
            continue
        if section is None:
            raise SpecParseError("content before the first section header", lineno)
        if "=" not in line:
            raise SpecParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if section == "cocycle" and _WORD.match(key):
            word = tuple(_ints(key, lineno, "word letters"))
            entries.append((word, _floats(value, lineno, "matrix entries", 4), lineno))
            continue
        if key not in SECTIONS[section]:
            raise SpecParseError(f"unknown key {key!r} in [{section}]", lineno)
        if key == "row":
            rows.append((_ints(value, lineno, "row entries"), lineno))
            continue
        if key in seen[section]:
            raise SpecParseError(f"duplicate key {key!r}", lineno)
        seen[section][key] = (value, lineno)

    if not seen:
        raise SpecParseError("empty spec file")
    cocycle = seen.get("cocycle", {})
    builtin = seen.get("builtin")
    kind = cocycle.get("kind", ("builtin" if builtin is not None else "locally-constant", None))
    if kind[0] not in KINDS:
        raise SpecParseError(f"unknown cocycle kind {kind[0]!r}", kind[1])

    if kind[0] == "builtin":
        if builtin is None or "name" not in builtin:
            raise SpecParseError("builtin cocycles need a [builtin] section with a name")
        if entries or "window" in cocycle or "fill" in cocycle:
            raise SpecParseError("builtin cocycles take no table", (entries[0][2] if entries else None))
        name, line = builtin["name"]
        params = {}
        if "k0" in builtin:
            params["k0"] = _ints(builtin["k0"][0], builtin["k0"][1], "k0")[0]
        alpha_src = builtin.get("alpha") or cocycle.get("alpha")
        if alpha_src is not None:
            params["alpha"] = _floats(alpha_src[0], alpha_src[1], "alpha", 1)[0]
        try:
            return make_builtin(name, **params)
        except KeyError as exc:
            raise SpecParseError(str(exc.args[0]), line) from None
        except (ValueError, CocycleLabError) as exc:
            raise SpecParseError(str(exc), line) from None

    if builtin is not None:
        raise SpecParseError("[builtin] section given for a locally constant cocycle")
    sft_sec = seen.get("sft")
    if sft_sec is None:
        raise SpecParseError("locally constant cocycles need an [sft] section")
    base = _ints(sft_sec["base"][0], sft_sec["base"][1], "base")[0] if "base" in sft_sec else 1
    if not rows:
        raise SpecParseError("[sft] needs its rows")
    if "size" in sft_sec:
        size = _ints(sft_sec["size"][0], sft_sec["size"][1], "size")[0]
        if size != len(rows):
            raise SpecParseError(f"size = {size} but {len(rows)} rows given", sft_sec["size"][1])
    for r, line in rows:
        if len(r) != len(rows) or any(v not in (0, 1) for v in r):
            raise SpecParseError("rows must be 0/1 and form a square matrix", line)
    try:
        sft = TransitionMatrix(tuple(tuple(r) for r, _ in rows), base)
    except CocycleLabError as exc:
        raise SpecParseError(str(exc), rows[0][1]) from None

    win = cocycle.get("window", ("0 0", None))
    window = _ints(win[0], win[1], "window")
    if len(window) != 2 or not window[0] <= 0 <= window[1]:
        raise SpecParseError("window must be two integers lo <= 0 <= hi", win[1])
    alpha_src = cocycle.get("alpha", ("1", None))
    alpha = _floats(alpha_src[0], alpha_src[1], "alpha", 1)[0]
    width = window[1] - window[0] + 1
    table = {}
    for word, vals, line in entries:
        if len(word) != width:
            raise SpecParseError(f"word {word} should have {width} letters", line)
        if word in table:
            raise SpecParseError(f"word {word} listed twice", line)
        m = Mat2(*vals)
        if not m.is_sl2(SL2_TOL):
            raise SpecParseError(f"matrix for {word} has determinant {m.det!r}, not 1", line)
        table[word] = m
    if "fill" in cocycle:
        vals, line = cocycle["fill"]
        m = Mat2(*_floats(vals, line, "fill matrix", 4))
        if not m.is_sl2(SL2_TOL):
            raise SpecParseError(f"fill matrix has determinant {m.det!r}, not 1", line)
        for w in admissible_words(sft, width):
            table.setdefault(w, m)
    try:
        return LocallyConstantCocycle(sft, tuple(window), table, alpha)
    except (WordNotInTable, NotSL2, ValueError) as exc:
        raise SpecParseError(str(exc)) from None


def load_spec(path) -> Cocycle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


def _num(v):
    return format(v, ".17g")


def dump_spec(spec: Cocycle) -> str:
    """Canonical text for ``spec``; ``parse_spec(dump_spec(s)) == s``."""
    if not isinstance(spec, LocallyConstantCocycle):
        lines = ["[builtin]", f"name = {spec.name}"]
        if hasattr(spec, "k0"):
            lines.append(f"k0 = {spec.k0}")
        lines.append(f"alpha = {_num(spec.alpha)}")
        return "\n".join(lines) + "\n"
    sft = spec.sft
    lines = ["[sft]", f"size = {sft.size}", f"base = {sft.base}"]
    lines += ["row = " + " ".join(str(v) for v in row) for row in sft.q]
    lines += ["", "[cocycle]", "kind = locally-constant", f"window = {spec.window[0]} {spec.window[1]}",
              f"alpha = {_num(spec.alpha)}"]
    for w, m in spec.table.items():
        lines.append(" ".join(map(str, w)) + " = " + " ".join(_num(v) for v in m))
    return "\n".join(lines) + "\n"


def spec_digest(spec: Cocycle) -> str:
    return hashlib.sha256(dump_spec(spec).encode()).hexdigest()


def parse_point(text: str) -> SymbolSequence:
    """``left:core:right@start``, e.g. ``0:1:0@0`` for the point with a single 1 at index 0.

    Letters may be separated by spaces or commas for alphabets beyond 9.
    """
    body, _, start = text.partition("@")
    parts = body.split(":")
    if len(parts) != 3:
        raise ValueError(f"point {text!r} must look like left:core:right@start")

    def word(s):
        s = s.strip()
        if not s:
            return ()
        if any(c in s for c in " ,"):
            return tuple(int(t) for t in re.split(r"[\s,]+", s) if t)
        return tuple(int(c) for c in s)

    left, core, right = (word(p) for p in parts)
    if not left or not right:
        raise ValueError(f"point {text!r} needs nonempty periodic tails")
    return SymbolSequence(left, core, right, int(start) if start else 0)


def format_point(x: SymbolSequence) -> str:
    if all(0 <= s < 10 for s in x.symbols()):
        def w(t):
            return "".join(map(str, t))
    else:
        def w(t):
            # trailing comma keeps a lone multi-digit letter from splitting into digits
            return ",".join(map(str, t)) + ("," if len(t) == 1 else "")

    return f"{w(x.left)}:{w(x.core)}:{w(x.right)}@{x.core_start}"


__all__ = ["dump_spec", "format_point", "load_spec", "parse_point", "parse_spec", "spec_digest"]
