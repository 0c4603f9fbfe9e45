"""Canonical edge-list files.

Format: a header line ``<n> <m>`` followed by ``m`` lines ``<u> <v>`` with
``u < v`` in strictly increasing lexicographic order.  Lines starting with
``#`` are ignored.  ASCII, LF line endings.
"""

import os
import tempfile

import numpy as np

from .graph import Graph


class EdgeListError(ValueError):
    pass


def format_graph(G):
    lines = [f"{G.n} {G.m}"]
    if G.m:
        lines.append("\n".join(f"{u} {v}" for u, v in G.edges.tolist()))
    return "\n".join(lines) + "\n"


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_edgelist(G, path):
    atomic_write(path, format_graph(G))


def _parse_pair(line, lineno):
    parts = line.split()
    if len(parts) != 2:
        raise EdgeListError(f"line {lineno}: expected two integers, got {line!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise EdgeListError(f"line {lineno}: expected two integers, got {line!r}") from None


def parse_edgelist(text):
    rows = [(i, line) for i, line in enumerate(text.split("\n"), start=1)
            if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise EdgeListError("line 1: missing header '<n> <m>'")
    lineno, header = rows[0]
    n, m = _parse_pair(header, lineno)
    if n < 0 or m < 0:
        raise EdgeListError(f"line {lineno}: negative header value")
    body = rows[1:]
    if len(body) != m:
        raise EdgeListError(f"line {lineno}: header announces {m} edges, file has {len(body)}")
    try:
        edges = np.array([line.split() for _, line in body], dtype=np.int64).reshape(-1, 2)
    except ValueError:
        for ln, line in body:
            _parse_pair(line, ln)
        raise
    if m:
        _check_canonical(n, edges, [ln for ln, _ in body])
    return Graph(n, edges)


def _check_canonical(n, edges, linenos):
    u, v = edges[:, 0], edges[:, 1]
    bad = (u < 0) | (v >= n) | (u >= v)
    if bad.any():
        i = int(np.argmax(bad))
        raise EdgeListError(f"line {linenos[i]}: edge {u[i]} {v[i]} is not of the form u < v < n")
    keys = u * n + v
    unordered = keys[1:] <= keys[:-1]
    if unordered.any():
        i = int(np.argmax(unordered)) + 1
        raise EdgeListError(f"line {linenos[i]}: edges not in strictly increasing order")


def read_edgelist(path):
    with open(path, "r", encoding="ascii", newline="") as fh:
        return parse_edgelist(fh.read())
