"""Report documents: conversion of results to plain trees, JSON with 17-digit floats, CSV tables."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import time

import numpy as np

from .sl2 import Mat2, ProjectiveArc
from .specfile import format_point
from .symbolic import PeriodicOrbit, SymbolSequence

SCHEMA_VERSION = 1
TOOL = "cocycle-lab"
TOOL_VERSION = "0.1.0"


def word_text(word) -> str:
    return "".join(map(str, word)) if all(0 <= s < 10 for s in word) else " ".join(map(str, word))


def to_tree(obj):
    """Plain dict/list/scalar view of results, ready for serialization."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Mat2):
        return [[obj.a, obj.b], [obj.c, obj.d]]
    if isinstance(obj, SymbolSequence):
        return format_point(obj)
    if isinstance(obj, PeriodicOrbit):
        return {"word": word_text(obj.word), "period": obj.period}
    if isinstance(obj, ProjectiveArc):
        return {"center": obj.center, "half_width": obj.half_width}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_tree(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {str(k): to_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, range)):
        return [to_tree(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_tree(obj.tolist())
    return repr(obj)


def _float(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, ".17g")


def dumps(tree, indent=None) -> str:
    """JSON text with every float written to 17 significant digits."""
    out = []

    def emit(node, depth):
        pad = "" if indent is None else "\n" + " " * (indent * (depth + 1))
        end = "" if indent is None else "\n" + " " * (indent * depth)
        sep = ", " if indent is None else ","
        if isinstance(node, bool) or node is None:
            out.append(json.dumps(node))
        elif isinstance(node, int):
            out.append(str(node))
        elif isinstance(node, float):
            out.append(_float(node))
        elif isinstance(node, str):
            out.append(json.dumps(node))
        elif isinstance(node, dict):
            if not node:
                out.append("{}")
                return
            out.append("{")
            for i, (k, v) in enumerate(node.items()):
                if i:
                    out.append(sep)
                out.append(pad + json.dumps(str(k)) + ": ")
                emit(v, depth + 1)
            out.append(end + "}")
        elif isinstance(node, list):
            if not node:
                out.append("[]")
                return
            out.append("[")
            for i, v in enumerate(node):
                if i:
                    out.append(sep)
                out.append(pad)
                emit(v, depth + 1)
            out.append(end + "]")
        else:
            raise TypeError(f"cannot serialize {type(node).__name__}")

    emit(tree, 0)
    return "".join(out)


class ReportDocument:
    """Versioned report: command, parameters, results and timing."""

    def __init__(self, command, parameters, spec_digest=None):
        self.command = command
        self.parameters = dict(parameters)
        self.spec_digest = spec_digest
        self.results = {}
        self._t0 = time.perf_counter()
        self.wall_time = None

    def add(self, key, value):
        self.results[key] = value
        return self

    def finish(self):
        self.wall_time = time.perf_counter() - self._t0
        return self

    def tree(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": TOOL,
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "spec_digest": self.spec_digest,
            "parameters": to_tree(self.parameters),
            "results": to_tree(self.results),
            "wall_time_s": self.wall_time,
        }

    def to_json(self, indent=2) -> str:
        return dumps(self.tree(), indent)

    def to_jsonl(self) -> str:
        return dumps(self.tree()) + "\n"


def exponent_csv(rows) -> str:
    """CSV with columns ``period, word, lambda_plus``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["period", "word", "lambda_plus"])
    for period, word, lam in rows:
        w.writerow([period, word_text(word), format(lam, ".17g")])
    return buf.getvalue()
