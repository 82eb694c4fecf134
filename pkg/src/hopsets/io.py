"""Edge-list text format for graphs and augment sets.

Header ``n m [weighted]``, then ``m`` lines ``u v [w]`` with 0-based ids.
``#`` starts a comment.  Augment-set files carry a ``# augment`` line before
the header.
"""
from __future__ import annotations

import io as _io
from pathlib import Path

import numpy as np

from .augment import AugmentSet
from .errors import InputError, ParseError
from .graph import DiGraph, weight_bound

AUGMENT_FLAG = "# augment"


def _lines(source):
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read().splitlines()
    if hasattr(source, "read"):
        return source.read().splitlines()
    return str(source).splitlines()


def _parse(lines):
    """(n, weighted, is_augment, src, dst, w) from raw lines."""
    is_augment = False
    header = None
    rows = []
    for lineno, raw in enumerate(lines, 1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            if header is None and stripped.split() == ["#", "augment"]:
                is_augment = True
            continue
        body = stripped.split("#", 1)[0].split()
        if not body:
            continue
        if header is None:
            if len(body) not in (2, 3) or (len(body) == 3 and body[2] != "weighted"):
                raise ParseError("header must be 'n m' or 'n m weighted'", lineno)
            try:
                n, m = int(body[0]), int(body[1])
            except ValueError:
                raise ParseError("header counts must be integers", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("header counts must be non-negative", lineno)
            header = (n, m, len(body) == 3, lineno)
            continue
        weighted = header[2]
        if len(body) != (3 if weighted else 2):
            raise ParseError(f"expected {'u v w' if weighted else 'u v'}", lineno)
        try:
            vals = [int(x) for x in body]
        except ValueError:
            raise ParseError("edge fields must be integers", lineno) from None
        n = header[0]
        if not (0 <= vals[0] < n and 0 <= vals[1] < n):
            raise ParseError(f"endpoint outside [0, {n})", lineno)
        if weighted and vals[2] < 0:
            raise ParseError("negative weight", lineno)
        rows.append(vals)
    if header is None:
        raise ParseError("missing header line", len(lines) or 1)
    n, m, weighted, hline = header
    if len(rows) != m:
        raise ParseError(f"header promises {m} edges, found {len(rows)}", hline)
    arr = np.asarray(rows, dtype=np.int64).reshape(-1, 3 if weighted else 2)
    return n, weighted, is_augment, arr[:, 0], arr[:, 1], (arr[:, 2] if weighted else None)


def read_graph(source, weight_exponent=4):
    """Parse a graph; W above n**weight_exponent is rejected (None disables)."""
    n, weighted, is_augment, src, dst, w = _parse(_lines(source))
    if is_augment:
        raise InputError("expected a graph file, got an augment set")
    bound = None if weight_exponent is None else weight_bound(n, weight_exponent)
    return DiGraph.from_arrays(n, src, dst, w, weight_bound=bound)


def read_augment(source):
    """Parse an augment-set file into (n, AugmentSet)."""
    n, weighted, is_augment, src, dst, w = _parse(_lines(source))
    if not is_augment:
        raise InputError(f"augment files must start with '{AUGMENT_FLAG}'")
    out = AugmentSet(weighted=weighted)
    for i in range(src.size):
        if src[i] == dst[i]:
            raise InputError(f"augment set contains self-loop ({src[i]}, {src[i]})")
    out.add_arrays(src, dst, w)
    return n, out


def _dump(n, src, dst, w, augment):
    buf = _io.StringIO()
    if augment:
        buf.write(AUGMENT_FLAG + "\n")
    buf.write(f"{n} {len(src)}{' weighted' if w is not None else ''}\n")
    if w is None:
        for u, v in zip(src.tolist(), dst.tolist()):
            buf.write(f"{u} {v}\n")
    else:
        for u, v, x in zip(src.tolist(), dst.tolist(), w.tolist()):
            buf.write(f"{u} {v} {x}\n")
    return buf.getvalue()


def format_graph(g):
    src, dst = g.edges()
    return _dump(g.n, src, dst, g.weights() if g.weighted else None, False)


def format_augment(n, h):
    src, dst, w = h.arrays()
    return _dump(n, src, dst, w, True)


def write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")
