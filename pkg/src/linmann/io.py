"""Plain-text matrix and graph formats, report and trace writers.

Matrix file: first line ``n``, then ``n`` rows of ``n`` whitespace-separated
numbers.  Graph file: first line ``n_nodes``, then one ``i j w`` edge per line
with 1-based node indices.  Blank lines and ``#`` comments are ignored.
Numbers are written with 17 significant digits so values survive a round trip.
"""

import json

import numpy as np

from .applications import DirectedWeightedGraph
from .errors import ParseError

MACHINE_MARKER = "--- machine-readable (json) ---"


def fmt_float(v):
    return "%.17g" % v


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield lineno, raw, body


def _tokens(raw, body):
    col = 0
    for tok in body.split():
        col = raw.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def _number(tok, lineno, col, kind=float):
    try:
        v = kind(tok)
    except ValueError:
        raise ParseError(f"expected {'an integer' if kind is int else 'a number'}, got {tok!r}",
                         lineno, col) from None
    if kind is float and not np.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", lineno, col)
    return v


def _header(lines, what):
    try:
        lineno, raw, body = next(lines)
    except StopIteration:
        raise ParseError(f"empty {what} file", 1, 1) from None
    toks = list(_tokens(raw, body))
    if len(toks) != 1:
        raise ParseError(f"first line must hold the {what} size only", lineno, toks[1][0] if len(toks) > 1 else 1)
    col, tok = toks[0]
    n = _number(tok, lineno, col, int)
    if n <= 0:
        raise ParseError(f"{what} size must be positive, got {n}", lineno, col)
    return n, lineno


def parse_matrix(text):
    lines = _content_lines(text)
    n, last = _header(lines, "matrix")
    rows = []
    for lineno, raw, body in lines:
        toks = list(_tokens(raw, body))
        if len(rows) == n:
            raise ParseError(f"extra data after {n} matrix rows", lineno, toks[0][0])
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else len(raw.rstrip()) + 1
            raise ParseError(f"row {len(rows) + 1} has {len(toks)} entries, expected {n}", lineno, col)
        rows.append([_number(t, lineno, c) for c, t in toks])
        last = lineno
    if len(rows) != n:
        raise ParseError(f"expected {n} matrix rows, found {len(rows)}", last + 1, 1)
    return np.array(rows, dtype=float)


def read_matrix(path):
    with open(path) as fh:
        return parse_matrix(fh.read())


def format_matrix(M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    lines = [str(M.shape[0])]
    lines += [" ".join(fmt_float(v) for v in row) for row in M]
    return "\n".join(lines) + "\n"


def write_matrix(path, M):
    with open(path, "w") as fh:
        fh.write(format_matrix(M))


def parse_graph(text):
    lines = _content_lines(text)
    n, _ = _header(lines, "graph")
    edges = []
    for lineno, raw, body in lines:
        toks = list(_tokens(raw, body))
        if len(toks) != 3:
            raise ParseError("edge lines must read 'i j w'", lineno, toks[0][0])
        (ci, ti), (cj, tj), (cw, tw) = toks
        i, j = _number(ti, lineno, ci, int), _number(tj, lineno, cj, int)
        w = _number(tw, lineno, cw)
        for node, col in ((i, ci), (j, cj)):
            if not 1 <= node <= n:
                raise ParseError(f"node {node} outside 1..{n}", lineno, col)
        if i == j:
            raise ParseError("self-loops are not allowed", lineno, ci)
        if w < 0:
            raise ParseError("edge weight must be non-negative", lineno, cw)
        edges.append((i - 1, j - 1, w))
    return DirectedWeightedGraph.from_edges(n, edges)


def read_graph(path):
    with open(path) as fh:
        return parse_graph(fh.read())


def parse_vector(text):
    """Comma- or whitespace-separated numbers, as given to ``--x0``."""
    toks = text.replace(",", " ").split()
    if not toks:
        raise ParseError("empty vector")
    out = []
    for k, tok in enumerate(toks, start=1):
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"entry {k} of vector is not a number: {tok!r}") from None
        if not np.isfinite(v):
            raise ParseError(f"entry {k} of vector is not finite")
        out.append(v)
    return np.array(out)


# ---------------------------------------------------------------------------
# reports


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
        return v.value
    return v


def render_report(title, items, matrices, machine):
    """Key-value text, matrix blocks, then a JSON section with everything."""
    out = [f"# {title}"]
    for key, val in items:
        out.append(f"{key}: {val}")
    for name, M in matrices:
        out.append(f"matrix {name}:")
        out.append(format_matrix(M).rstrip("\n"))
    out.append(MACHINE_MARKER)
    out.append(json.dumps(_jsonable(machine), sort_keys=True, indent=1))
    return "\n".join(out) + "\n"


def parse_report(text):
    """Return the machine-readable section of a report as a dict."""
    if MACHINE_MARKER not in text:
        raise ParseError("report has no machine-readable section")
    return json.loads(text.split(MACHINE_MARKER, 1)[1])


def report_matrix(text, name):
    """Re-parse the text matrix block called `name` from a report."""
    lines = text.splitlines()
    head = f"matrix {name}:"
    try:
        start = lines.index(head) + 1
    except ValueError:
        raise ParseError(f"report has no matrix named {name!r}") from None
    n = int(lines[start])
    return parse_matrix("\n".join(lines[start:start + n + 1]))


def render_trace(traj, extra_columns=(), include_states=False, footer=()):
    """CSV with one row per step ``k < K`` and a ``#``-prefixed verdict block."""
    K = len(traj.fix_residuals)
    header = ["k", "alpha", "step_residual", "fix_residual"] + [name for name, _ in extra_columns]
    states = None
    if include_states:
        if len(traj.iterate_steps) != K + 1:
            raise ValueError("state columns need an unthinned trajectory")
        n = traj.iterates.shape[1]
        header += [f"x{i}" for i in range(n)]
        states = traj.iterates
    out = [",".join(header)]
    for k in range(K):
        row = [str(k), fmt_float(traj.alphas[k]), fmt_float(traj.residuals[k]),
               fmt_float(traj.fix_residuals[k])]
        row += [fmt_float(col[k]) for _, col in extra_columns]
        if states is not None:
            row += [fmt_float(v) for v in states[k]]
        out.append(",".join(row))
    v = traj.verdict
    out.append(f"# verdict: {v.status.value}")
    out.append(f"# iterations_used: {v.iterations_used}")
    for key in sorted(v.evidence):
        val = v.evidence[key]
        out.append(f"# {key}: {fmt_float(val) if isinstance(val, float) else val}")
    final = traj.iterates[-1]
    out.append("# final_state: " + " ".join(fmt_float(x) for x in final))
    if v.limit is not None:
        out.append("# limit: " + " ".join(fmt_float(x) for x in v.limit))
    for line in footer:
        out.append(f"# {line}")
    return "\n".join(out) + "\n"
