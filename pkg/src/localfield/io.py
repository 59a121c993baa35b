"""Plain-text formats for states, Hamiltonians and real matrices.

State file (pure)::

    dims 2 2
    0 0.70710678118654757 0
    ...                      # one "index real imag" line per amplitude

State file (mixed)::

    dims 2 2
    density
    0 0 0.5 0                # one "row col real imag" line per entry

Hamiltonian file::

    sites 2
    site 0 dim 2
    0 0 1 0                  # d*d "row col real imag" lines per site
    ...

Matrix / weight file::

    dim 2
    20 16
    16 20

Blank lines and ``#`` comments are ignored. Floats are written with 17
significant digits so that a write/read cycle is bit exact.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import LocalFieldError, ParseError
from .hamiltonian import LocalHamiltonian
from .states import DensityMatrix, PureState

_TOKEN = re.compile(r"\S+")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


class _Lines:
    """Iterator over (line_no, [(col, token), ...]) for non-empty lines."""

    def __init__(self, text: str):
        rows = []
        for no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
            if toks:
                rows.append((no, toks))
        self.rows = rows
        self.pos = 0
        self.last_line = len(text.splitlines())

    def peek(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else None

    def next(self, what: str):
        row = self.peek()
        if row is None:
            raise ParseError(f"unexpected end of file, expected {what}", self.last_line + 1, 1)
        self.pos += 1
        return row

    def done(self) -> bool:
        return self.pos >= len(self.rows)


def _int(tok, line, what, minimum=None) -> int:
    col, text = tok
    try:
        val = int(text)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {text!r}", line, col) from None
    if minimum is not None and val < minimum:
        raise ParseError(f"{what} must be >= {minimum}, got {val}", line, col)
    return val


def _float(tok, line, what) -> float:
    col, text = tok
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"expected real number {what}, got {text!r}", line, col) from None


def _expect(row, keyword: str, n_values: int | None = None):
    line, toks = row
    if toks[0][1] != keyword:
        raise ParseError(f"expected {keyword!r} header, got {toks[0][1]!r}", line, toks[0][0])
    if n_values is not None and len(toks) != n_values + 1:
        col = toks[-1][0] + len(toks[-1][1])
        raise ParseError(f"{keyword!r} takes {n_values} value(s), got {len(toks) - 1}", line, col)
    return line, toks[1:]


def _fields(row, count: int, what: str):
    line, toks = row
    if len(toks) != count:
        col = toks[-1][0] + len(toks[-1][1]) if len(toks) < count else toks[count][0]
        raise ParseError(f"{what} line needs {count} fields, got {len(toks)}", line, col)
    return line, toks


def _entries(lines: _Lines, shape: tuple[int, ...], what: str) -> np.ndarray:
    """Read exactly prod(shape) index/value lines into a complex array."""
    out = np.zeros(shape, dtype=complex)
    seen = np.zeros(shape, dtype=bool)
    k = len(shape)
    for _ in range(int(np.prod(shape))):
        line, toks = _fields(lines.next(f"{what} entry"), k + 2, what)
        idx = tuple(_int(toks[j], line, "index", 0) for j in range(k))
        for j, (i, bound) in enumerate(zip(idx, shape)):
            if i >= bound:
                raise ParseError(f"index {i} out of range (< {bound})", line, toks[j][0])
        if seen[idx]:
            raise ParseError(f"duplicate entry for index {idx}", line, toks[0][0])
        seen[idx] = True
        out[idx] = complex(_float(toks[k], line, "real part"), _float(toks[k + 1], line, "imaginary part"))
    return out


def _trailing(lines: _Lines):
    row = lines.peek()
    if row is not None:
        line, toks = row
        raise ParseError(f"unexpected trailing content {toks[0][1]!r}", line, toks[0][0])


# --- states ----------------------------------------------------------------

def format_state(state) -> str:
    out = ["dims " + " ".join(str(d) for d in state.site_dims)]
    if isinstance(state, PureState):
        for i, a in enumerate(state.amplitudes):
            out.append(f"{i} {fmt(a.real)} {fmt(a.imag)}")
    elif isinstance(state, DensityMatrix):
        out.append("density")
        m = state.matrix
        for r in range(m.shape[0]):
            for c in range(m.shape[1]):
                out.append(f"{r} {c} {fmt(m[r, c].real)} {fmt(m[r, c].imag)}")
    else:
        raise TypeError(f"cannot format {type(state).__name__}")
    return "\n".join(out) + "\n"


def parse_state(text: str):
    lines = _Lines(text)
    line, vals = _expect(lines.next("'dims' header"), "dims")
    if not vals:
        raise ParseError("'dims' needs at least one site dimension", line, 5)
    dims = tuple(_int(t, line, "site dimension", 1) for t in vals)
    d = int(np.prod(dims))
    nxt = lines.peek()
    if nxt is not None and nxt[1][0][1] == "density":
        _expect(lines.next("'density'"), "density", 0)
        m = _entries(lines, (d, d), "density")
        _trailing(lines)
        try:
            return DensityMatrix(dims, m)
        except LocalFieldError as exc:
            raise ParseError(f"invalid density matrix: {exc}", line) from None
    amps = _entries(lines, (d,), "amplitude")
    _trailing(lines)
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-8:
        raise ParseError(f"state norm {norm:.12g} is not 1", line)
    if abs(norm - 1.0) > 1e-12:
        return PureState.normalized(dims, amps)
    return PureState(dims, amps)


# --- Hamiltonians ----------------------------------------------------------

def format_hamiltonian(h: LocalHamiltonian) -> str:
    out = [f"sites {h.n_sites}"]
    for i, (d, g) in enumerate(zip(h.site_dims, h.generators)):
        out.append(f"site {i} dim {d}")
        for r in range(d):
            for c in range(d):
                out.append(f"{r} {c} {fmt(g[r, c].real)} {fmt(g[r, c].imag)}")
    return "\n".join(out) + "\n"


def parse_hamiltonian(text: str) -> LocalHamiltonian:
    lines = _Lines(text)
    line, vals = _expect(lines.next("'sites' header"), "sites", 1)
    n = _int(vals[0], line, "site count", 1)
    dims, gens = [], []
    for i in range(n):
        line, toks = lines.next(f"'site {i} dim d' block header")
        words = [t for _, t in toks]
        if len(toks) != 4 or words[0] != "site" or words[2] != "dim":
            raise ParseError(f"expected 'site {i} dim d'", line, toks[0][0])
        if _int(toks[1], line, "site index", 0) != i:
            raise ParseError(f"site blocks must appear in order; expected site {i}", line, toks[1][0])
        d = _int(toks[3], line, "site dimension", 1)
        g = _entries(lines, (d, d), "generator")
        dims.append(d)
        gens.append(g)
    _trailing(lines)
    try:
        return LocalHamiltonian(tuple(dims), tuple(gens))
    except LocalFieldError as exc:
        raise ParseError(f"invalid Hamiltonian: {exc}") from None


# --- real matrices (weights, QFIM dumps) ------------------------------------

def format_matrix(m) -> str:
    a = np.real(np.asarray(getattr(m, "matrix", m)))
    out = [f"dim {a.shape[0]}"]
    out += [" ".join(fmt(x) for x in row) for row in a]
    return "\n".join(out) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = _Lines(text)
    line, vals = _expect(lines.next("'dim' header"), "dim", 1)
    n = _int(vals[0], line, "dimension", 1)
    rows = []
    for r in range(n):
        line, toks = _fields(lines.next(f"matrix row {r}"), n, f"row {r}")
        rows.append([_float(t, line, f"in row {r}") for t in toks])
    _trailing(lines)
    return np.array(rows, dtype=float)


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
