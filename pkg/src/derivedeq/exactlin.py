"""Exact linear algebra over prime fields and the quiver file format.

Matrices are plain ``numpy`` int64 arrays holding residues in ``[0, p)``.
Every routine takes the modulus explicitly, so nothing here carries state.
Row reduction always pivots on the first nonzero column and, inside that
column, on the topmost remaining row; bases returned by :func:`kernel` and
:func:`image` are in reduced row echelon form, hence canonical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CycleError, DimensionMismatch, ParseError, RangeError

Array = np.ndarray

# products of two residues must fit in int64
MAX_PRIME = 3037000493


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise RangeError(f"field size {p!r} is not a prime")
    if p > MAX_PRIME:
        raise RangeError(f"prime {p} too large for int64 arithmetic")
    return int(p)


def as_fp(a, p: int, shape: Optional[Tuple[int, int]] = None) -> Array:
    """Copy ``a`` into a fresh int64 array reduced mod ``p``."""
    arr = np.array(a, dtype=np.int64)
    if shape is not None:
        arr = arr.reshape(shape)
    if arr.ndim == 1 and shape is None:
        arr = arr.reshape(1, -1) if arr.size else np.zeros((0, 0), dtype=np.int64)
    return np.mod(arr, p)


def zeros(rows: int, cols: int) -> Array:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> Array:
    return np.eye(n, dtype=np.int64)


def inv_scalar(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(int(x), p - 2, p)


def matmul(a: Array, b: Array, p: int) -> Array:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.mod(a @ b, p)


def rref(a: Array, p: int) -> Tuple[Array, Tuple[int, ...]]:
    """Reduced row echelon form of ``a`` and its pivot columns."""
    m = np.mod(np.array(a, dtype=np.int64), p)
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = np.mod(m[r] * inv_scalar(lead, p), p)
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = np.mod(m[hit] - np.outer(col[hit], m[r]), p)
        pivots.append(c)
        r += 1
    return m, tuple(pivots)


def rank(a: Array, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def row_basis(a: Array, p: int) -> Array:
    """Canonical basis (RREF rows) of the row space of ``a``."""
    if a.shape[0] == 0:
        return zeros(0, a.shape[1])
    m, piv = rref(a, p)
    return m[: len(piv)].copy()


def kernel(a: Array, p: int) -> Array:
    """Rows form the canonical basis of ``{x : a @ x = 0}``."""
    rows, cols = a.shape
    if rows == 0:
        return identity(cols)
    m, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(len(free), cols)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for j, pc in enumerate(piv):
            basis[k, pc] = (-m[j, f]) % p
    return row_basis(basis, p)


def image(a: Array, p: int) -> Array:
    """Rows form the canonical basis of the column space of ``a``."""
    return row_basis(a.T, p)


def solve(a: Array, b: Array, p: int) -> Optional[Array]:
    """One solution ``x`` of ``a @ x = b`` (free variables zero), or None."""
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    n = a.shape[1]
    aug = np.hstack([np.mod(a, p), np.mod(b, p)]) if a.shape[0] else zeros(0, n + b.shape[1])
    m, piv = rref(aug, p)
    if any(pc >= n for pc in piv):
        return None
    x = zeros(n, b.shape[1])
    for j, pc in enumerate(piv):
        x[pc] = m[j, n:]
    return x


def in_row_space(v: Array, basis: Array, p: int) -> bool:
    if basis.shape[0] == 0:
        return not np.any(np.mod(v, p))
    return rank(np.vstack([basis, v.reshape(1, -1)]), p) == rank(basis, p)


def is_invertible(a: Array, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def inverse(a: Array, p: int) -> Array:
    n = a.shape[0]
    x = solve(a, identity(n), p)
    if x is None or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("matrix is not invertible")
    return x


# -- FpScalar / FpMatrix value types ---------------------------------------


@dataclass(frozen=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not 0 <= self.value < self.p:
            raise RangeError(f"{self.value} is not a residue mod {self.p}")

    def __add__(self, other: "FpScalar") -> "FpScalar":
        return FpScalar((self.value + other.value) % self.p, self.p)

    def __mul__(self, other: "FpScalar") -> "FpScalar":
        return FpScalar((self.value * other.value) % self.p, self.p)

    def inverse(self) -> "FpScalar":
        return FpScalar(inv_scalar(self.value, self.p), self.p)


class FpMatrix:
    """Immutable matrix over F_p."""

    __slots__ = ("_a", "p")

    def __init__(self, entries, p: int, shape: Optional[Tuple[int, int]] = None) -> None:
        self.p = check_prime(p)
        arr = np.array(entries, dtype=np.int64)
        if shape is not None:
            if arr.size != shape[0] * shape[1]:
                raise DimensionMismatch(f"{arr.size} entries do not fill {shape}")
            arr = arr.reshape(shape)
        elif arr.ndim != 2:
            raise DimensionMismatch("FpMatrix needs a 2-d grid or an explicit shape")
        arr = np.mod(arr, self.p)
        arr.setflags(write=False)
        self._a = arr

    @property
    def array(self) -> Array:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self._a.shape == other._a.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self) -> int:
        return hash((self.p, self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix({self._a.tolist()}, p={self.p})"

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(matmul(self._a, other._a, self.p), self.p)

    def rank(self) -> int:
        return rank(self._a, self.p)

    def kernel(self) -> "FpMatrix":
        return FpMatrix(kernel(self._a, self.p), self.p)

    def image(self) -> "FpMatrix":
        return FpMatrix(image(self._a, self.p), self.p)


def solve_linear(a: FpMatrix, mode: str, rhs: Optional[FpMatrix] = None) -> Union[FpMatrix, int, None]:
    """Dispatch for ``kernel``, ``image``, ``rank`` and ``solve``.

    ``kernel`` and ``image`` return bases as the rows of an RREF matrix.
    ``solve`` returns a column solution of ``a @ x = rhs`` or None.
    """
    if mode == "rank":
        return a.rank()
    if mode == "kernel":
        return FpMatrix(kernel(a.array, a.p), a.p)
    if mode == "image":
        return FpMatrix(image(a.array, a.p), a.p)
    if mode == "solve":
        if rhs is None:
            raise DimensionMismatch("solve mode needs a right-hand side")
        if rhs.p != a.p:
            raise DimensionMismatch("moduli differ")
        x = solve(a.array, rhs.array, a.p)
        return None if x is None else FpMatrix(x, a.p)
    raise ValueError(f"unknown mode {mode!r}")


# -- quivers ----------------------------------------------------------------


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic quiver; vertices and arrow endpoints are 0-based."""

    vertex_count: int
    arrows: Tuple[Tuple[int, int], ...]
    labels: Tuple[str, ...]
    name: Optional[str] = None
    field: int = 2

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise RangeError("a quiver needs at least one vertex")
        check_prime(self.field)
        if len(self.labels) != len(self.arrows):
            raise DimensionMismatch("one label per arrow")
        if len(set(self.labels)) != len(self.labels):
            raise ParseError("duplicate arrow label")
        for s, t in self.arrows:
            for v in (s, t):
                if not 0 <= v < self.vertex_count:
                    raise RangeError(f"vertex {v + 1} out of range 1..{self.vertex_count}")
        cyc = find_cycle(self.vertex_count, self.arrows)
        if cyc is not None:
            path = "->".join(str(v + 1) for v in cyc)
            raise CycleError(f"oriented cycle {path}", witness=[v + 1 for v in cyc])

    @property
    def n(self) -> int:
        return self.vertex_count

    def out_arrows(self, v: int) -> List[int]:
        return [k for k, (s, _) in enumerate(self.arrows) if s == v]

    def in_arrows(self, v: int) -> List[int]:
        return [k for k, (_, t) in enumerate(self.arrows) if t == v]

    def topological_order(self) -> List[int]:
        """Sources first; ties broken by vertex index."""
        indeg = [0] * self.n
        for _, t in self.arrows:
            indeg[t] += 1
        ready = sorted(v for v in range(self.n) if indeg[v] == 0)
        out: List[int] = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for k in self.out_arrows(v):
                t = self.arrows[k][1]
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
                    ready.sort()
        return out

    def opposite(self) -> "Quiver":
        return Quiver(
            self.vertex_count,
            tuple((t, s) for s, t in self.arrows),
            self.labels,
            None if self.name is None else self.name + "_op",
            self.field,
        )

    def with_field(self, p: int) -> "Quiver":
        return Quiver(self.vertex_count, self.arrows, self.labels, self.name, p)

    def paths(self, src: int, dst: int) -> List[Tuple[int, ...]]:
        """All paths src ~> dst as arrow-index tuples, in a fixed order."""
        out: List[Tuple[int, ...]] = []

        def walk(v: int, acc: Tuple[int, ...]) -> None:
            if v == dst:
                out.append(acc)
            for k in self.out_arrows(v):
                walk(self.arrows[k][1], acc + (k,))

        walk(src, ())
        return out


def find_cycle(n: int, arrows: Sequence[Tuple[int, int]]) -> Optional[List[int]]:
    """Return a closed vertex path [v0, ..., v0] if one exists."""
    adj: Dict[int, List[int]] = {v: [] for v in range(n)}
    for s, t in arrows:
        if 0 <= s < n and 0 <= t < n:
            adj[s].append(t)
    color = [0] * n
    stack: List[int] = []

    def dfs(v: int) -> Optional[List[int]]:
        color[v] = 1
        stack.append(v)
        for w in adj[v]:
            if color[w] == 1:
                i = stack.index(w)
                return stack[i:] + [w]
            if color[w] == 0:
                found = dfs(w)
                if found:
                    return found
        stack.pop()
        color[v] = 2
        return None

    for v in range(n):
        if color[v] == 0:
            found = dfs(v)
            if found:
                return found
    return None


_KEY = re.compile(r"^(name|field|vertices|arrows)\s*:\s*(.*)$")
_ARROW = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(-?\d+)\s*->\s*(-?\d+)$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def parse_quiver(text: str) -> Quiver:
    """Parse the line-oriented quiver format.

    Grammar (one item per line, ``#`` starts a comment)::

        name: <identifier>          optional
        field: <prime>              optional, default 2
        vertices: <n>               required
        arrows:                     required, may be followed by nothing
        <label>: <i> -> <j>         only after ``arrows:``, 1-based
    """
    name: Optional[str] = None
    field: Optional[int] = None
    vertices: Optional[int] = None
    in_arrows = False
    seen_arrows = False
    arrows: List[Tuple[int, int]] = []
    labels: List[str] = []
    label_line: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = _KEY.match(line)
        if key and not (in_arrows and _ARROW.match(line)):
            k, val = key.group(1), key.group(2).strip()
            if k == "name":
                if name is not None:
                    raise ParseError("repeated 'name'", lineno)
                if not _IDENT.match(val):
                    raise ParseError(f"bad identifier {val!r}", lineno)
                name = val
            elif k == "field":
                if field is not None:
                    raise ParseError("repeated 'field'", lineno)
                if not re.fullmatch(r"\d+", val):
                    raise ParseError(f"bad field size {val!r}", lineno)
                field = int(val)
                if not is_prime(field):
                    raise ParseError(f"field size {field} is not prime", lineno)
            elif k == "vertices":
                if vertices is not None:
                    raise ParseError("repeated 'vertices'", lineno)
                if not re.fullmatch(r"\d+", val) or int(val) < 1:
                    raise ParseError(f"bad vertex count {val!r}", lineno)
                vertices = int(val)
            else:
                if seen_arrows:
                    raise ParseError("repeated 'arrows'", lineno)
                if val:
                    raise ParseError("arrow entries go on their own lines", lineno)
                seen_arrows = in_arrows = True
            continue
        arr = _ARROW.match(line)
        if arr and in_arrows:
            lab, s, t = arr.group(1), int(arr.group(2)), int(arr.group(3))
            if lab in label_line:
                raise ParseError(f"duplicate arrow label {lab!r} (first on line {label_line[lab]})", lineno)
            label_line[lab] = lineno
            if vertices is not None and not (1 <= s <= vertices and 1 <= t <= vertices):
                raise RangeError(f"line {lineno}: vertex out of range 1..{vertices}", witness=lineno)
            arrows.append((s, t))
            labels.append(lab)
            continue
        raise ParseError(f"cannot parse {line!r}", lineno)
    if vertices is None:
        raise ParseError("missing 'vertices'")
    if not seen_arrows:
        raise ParseError("missing 'arrows'")
    for (s, t), lab in zip(arrows, labels):
        if not (1 <= s <= vertices and 1 <= t <= vertices):
            raise RangeError(f"arrow {lab}: vertex out of range 1..{vertices}", witness=label_line[lab])
    return Quiver(
        vertices,
        tuple((s - 1, t - 1) for s, t in arrows),
        tuple(labels),
        name,
        2 if field is None else field,
    )


def serialize_quiver(q: Quiver) -> str:
    lines = []
    if q.name is not None:
        lines.append(f"name: {q.name}")
    lines.append(f"field: {q.field}")
    lines.append(f"vertices: {q.vertex_count}")
    lines.append("arrows:")
    for (s, t), lab in zip(q.arrows, q.labels):
        lines.append(f"  {lab}: {s + 1} -> {t + 1}")
    return "\n".join(lines) + "\n"


def load_quiver(path: str) -> Quiver:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())
