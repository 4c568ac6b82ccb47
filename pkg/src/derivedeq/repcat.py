"""Representations of an acyclic quiver over F_p.

Conventions: a representation stores one vector space per vertex and, for
an arrow ``a: s -> t``, a matrix of shape ``dim[t] x dim[s]``.  The
projective ``P_i`` has basis the paths starting at ``i``; the injective
``I_i`` at vertex ``j`` is dual to the paths ``j ~> i``.

Ext^1 is computed from the standard resolution

    0 -> (+)_a P_t(a) (x) M_s(a) -> (+)_i P_i (x) M_i -> M -> 0

so a class in Ext^1(M, N) is a tuple ``g = (g_a: M_s -> N_t)`` modulo the
image of ``delta(f)_a = f_t M_a - N_a f_s``.  The middle term of ``g`` has
arrow maps ``[[N_a, g_a], [0, M_a]]``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import (
    DerivedEqError,
    DimensionMismatch,
    InjectiveInput,
    NotRepresentationFinite,
    ProjectiveInput,
)
from .exactlin import Array, Quiver


class Rep:
    """A representation: per-vertex dimensions and per-arrow matrices."""

    __slots__ = ("quiver", "dims", "maps")

    def __init__(self, quiver: Quiver, dims: Sequence[int], maps: Sequence[Array]) -> None:
        dims = tuple(int(d) for d in dims)
        if len(dims) != quiver.n:
            raise DimensionMismatch(f"expected {quiver.n} dimensions, got {len(dims)}")
        if any(d < 0 for d in dims):
            raise DimensionMismatch("negative dimension")
        if len(maps) != len(quiver.arrows):
            raise DimensionMismatch("one matrix per arrow")
        fixed = []
        for (s, t), m in zip(quiver.arrows, maps):
            m = np.mod(np.asarray(m, dtype=np.int64).reshape(dims[t], dims[s]), quiver.field)
            m.setflags(write=False)
            fixed.append(m)
        self.quiver = quiver
        self.dims = dims
        self.maps = tuple(fixed)

    @property
    def p(self) -> int:
        return self.quiver.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self) -> str:
        return f"Rep{self.dims}"

    @classmethod
    def zero(cls, q: Quiver) -> "Rep":
        return cls(q, [0] * q.n, [el.zeros(0, 0) for _ in q.arrows])

    def same_as(self, other: "Rep") -> bool:
        """Literal equality of the data, not isomorphism."""
        return self.dims == other.dims and all(
            np.array_equal(a, b) for a, b in zip(self.maps, other.maps)
        )


class RepMap:
    """A morphism of representations, checked to intertwine the arrows."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Rep, target: Rep, mats: Sequence[Array], check: bool = True) -> None:
        p = source.p
        fixed = []
        for v in range(source.quiver.n):
            m = np.mod(np.asarray(mats[v], dtype=np.int64).reshape(target.dims[v], source.dims[v]), p)
            fixed.append(m)
        self.source = source
        self.target = target
        self.mats = tuple(fixed)
        if check and not self.intertwines():
            raise DimensionMismatch("vertex maps do not intertwine the arrow maps")

    @property
    def p(self) -> int:
        return self.source.p

    def intertwines(self) -> bool:
        p = self.p
        for k, (s, t) in enumerate(self.source.quiver.arrows):
            lhs = el.matmul(self.mats[t], self.source.maps[k], p)
            rhs = el.matmul(self.target.maps[k], self.mats[s], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return not any(np.any(m) for m in self.mats)

    def then(self, other: "RepMap") -> "RepMap":
        """``other o self``."""
        p = self.p
        return RepMap(self.source, other.target, [el.matmul(b, a, p) for a, b in zip(self.mats, other.mats)], check=False)

    def scaled(self, c: int) -> "RepMap":
        return RepMap(self.source, self.target, [np.mod(m * c, self.p) for m in self.mats], check=False)

    def plus(self, other: "RepMap") -> "RepMap":
        return RepMap(self.source, self.target, [np.mod(a + b, self.p) for a, b in zip(self.mats, other.mats)], check=False)

    def rank_vector(self) -> Tuple[int, ...]:
        return tuple(el.rank(m, self.p) for m in self.mats)

    def is_mono(self) -> bool:
        return self.rank_vector() == self.source.dims

    def is_epi(self) -> bool:
        return self.rank_vector() == self.target.dims

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()


def identity_map(M: Rep) -> RepMap:
    return RepMap(M, M, [el.identity(d) for d in M.dims], check=False)


def zero_map(M: Rep, N: Rep) -> RepMap:
    return RepMap(M, N, [el.zeros(N.dims[v], M.dims[v]) for v in range(M.quiver.n)], check=False)


# -- standard representations -----------------------------------------------


def simple_rep(q: Quiver, i: int) -> Rep:
    dims = [0] * q.n
    dims[i] = 1
    return Rep(q, dims, [el.zeros(dims[t], dims[s]) for s, t in q.arrows])


def projective_rep(q: Quiver, i: int) -> Rep:
    basis = [q.paths(i, v) for v in range(q.n)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        m = el.zeros(len(basis[t]), len(basis[s]))
        for c, path in enumerate(basis[s]):
            m[basis[t].index(path + (k,)), c] = 1
        maps.append(m)
    return Rep(q, [len(b) for b in basis], maps)


def injective_rep(q: Quiver, i: int) -> Rep:
    basis = [q.paths(v, i) for v in range(q.n)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        # dual of  paths(t ~> i) -> paths(s ~> i),  w |-> k.w
        m = el.zeros(len(basis[t]), len(basis[s]))
        for r, path in enumerate(basis[t]):
            m[r, basis[s].index((k,) + path)] = 1
        maps.append(m)
    return Rep(q, [len(b) for b in basis], maps)


@dataclass(frozen=True)
class StandardReps:
    projectives: Tuple[Rep, ...]
    injectives: Tuple[Rep, ...]
    simples: Tuple[Rep, ...]


def standard_reps(q: Quiver) -> StandardReps:
    return StandardReps(
        tuple(projective_rep(q, i) for i in range(q.n)),
        tuple(injective_rep(q, i) for i in range(q.n)),
        tuple(simple_rep(q, i) for i in range(q.n)),
    )


def _injective_arrow_map(q: Quiver, k: int, v: int) -> Array:
    """Vertex-``v`` component of the map I_t -> I_s induced by ``k: s -> t``."""
    s, t = q.arrows[k]
    src = q.paths(v, t)
    dst = q.paths(v, s)
    m = el.zeros(len(dst), len(src))
    for c, path in enumerate(dst):
        m[c, src.index(path + (k,))] = 1
    return m


# -- constructions ----------------------------------------------------------


def direct_sum(reps: Sequence[Rep], q: Optional[Quiver] = None) -> Rep:
    if not reps:
        if q is None:
            raise DimensionMismatch("empty direct sum needs a quiver")
        return Rep.zero(q)
    q = reps[0].quiver
    dims = [sum(r.dims[v] for r in reps) for v in range(q.n)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        m = el.zeros(dims[t], dims[s])
        r0 = c0 = 0
        for r in reps:
            m[r0 : r0 + r.dims[t], c0 : c0 + r.dims[s]] = r.maps[k]
            r0 += r.dims[t]
            c0 += r.dims[s]
        maps.append(m)
    return Rep(q, dims, maps)


def offsets(reps: Sequence[Rep], v: int) -> List[int]:
    out = [0]
    for r in reps:
        out.append(out[-1] + r.dims[v])
    return out


def dual(M: Rep) -> Rep:
    """The k-dual, a representation of the opposite quiver."""
    return Rep(M.quiver.opposite(), M.dims, [m.T for m in M.maps])


def subrep(M: Rep, bases: Sequence[Array]) -> Tuple[Rep, RepMap]:
    """Subrepresentation spanned by the columns of ``bases[v]`` (assumed stable)."""
    p = M.p
    q = M.quiver
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        rhs = el.matmul(M.maps[k], bases[s], p)
        x = el.solve(bases[t], rhs, p) if bases[t].shape[1] or rhs.size else el.zeros(0, bases[s].shape[1])
        if x is None:
            raise DimensionMismatch("subspace is not stable under the arrow maps")
        maps.append(x)
    S = Rep(q, [b.shape[1] for b in bases], maps)
    return S, RepMap(S, M, list(bases), check=False)


def kernel_of(f: RepMap) -> Tuple[Rep, RepMap]:
    p = f.p
    bases = [el.kernel(m, p).T for m in f.mats]
    return subrep(f.source, bases)


def image_of(f: RepMap) -> Tuple[Rep, RepMap]:
    p = f.p
    bases = [el.image(m, p).T for m in f.mats]
    return subrep(f.target, bases)


def cokernel_of(f: RepMap) -> Tuple[Rep, RepMap]:
    p = f.p
    q = f.source.quiver
    T = f.target
    left = [el.kernel(m.T, p) for m in f.mats]  # rows annihilate the image
    right = [el.solve(L, el.identity(L.shape[0]), p) if L.shape[0] else el.zeros(T.dims[v], 0) for v, L in enumerate(left)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        maps.append(el.matmul(el.matmul(left[t], T.maps[k], p), right[s], p))
    C = Rep(q, [L.shape[0] for L in left], maps)
    return C, RepMap(T, C, left, check=False)


def tensor_space(M: Rep, m: int) -> Rep:
    """``M (x) k^m`` with basis ordering ``x (x) e_j -> x*m + j``."""
    return Rep(M.quiver, [d * m for d in M.dims], [np.kron(a, el.identity(m)) for a in M.maps])


# -- Hom and Ext -------------------------------------------------------------


def _hom_system(M: Rep, N: Rep) -> Tuple[Array, List[int], List[int]]:
    """Matrix of ``delta`` from (+)_i Hom(M_i,N_i) to (+)_a Hom(M_s,N_t)."""
    q = M.quiver
    off0 = [0]
    for v in range(q.n):
        off0.append(off0[-1] + N.dims[v] * M.dims[v])
    off1 = [0]
    for s, t in q.arrows:
        off1.append(off1[-1] + N.dims[t] * M.dims[s])
    D = el.zeros(off1[-1], off0[-1])
    for k, (s, t) in enumerate(q.arrows):
        if off1[k + 1] == off1[k]:
            continue
        rows = slice(off1[k], off1[k + 1])
        D[rows, off0[t] : off0[t + 1]] += np.kron(el.identity(N.dims[t]), M.maps[k].T)
        D[rows, off0[s] : off0[s + 1]] -= np.kron(N.maps[k], el.identity(M.dims[s]))
    return np.mod(D, M.p), off0, off1


def _check_same(M: Rep, N: Rep) -> None:
    if M.quiver != N.quiver:
        raise DimensionMismatch("representations live on different quivers")


def hom_basis(M: Rep, N: Rep) -> List[RepMap]:
    _check_same(M, N)
    D, off0, _ = _hom_system(M, N)
    K = el.kernel(D, M.p)
    out = []
    for row in K:
        mats = [row[off0[v] : off0[v + 1]].reshape(N.dims[v], M.dims[v]) for v in range(M.quiver.n)]
        out.append(RepMap(M, N, mats, check=False))
    return out


def hom_dim(M: Rep, N: Rep) -> int:
    _check_same(M, N)
    D, off0, _ = _hom_system(M, N)
    return off0[-1] - el.rank(D, M.p)


def hom_coords(f: RepMap, basis: Sequence[RepMap]) -> Array:
    """Coordinates of ``f`` in ``basis`` (exact; raises if not in the span)."""
    if not basis:
        if not f.is_zero():
            raise DimensionMismatch("map is not in the span of an empty basis")
        return el.zeros(0, 1)[:, 0]
    cols = np.stack([np.concatenate([m.ravel() for m in b.mats]) for b in basis], axis=1)
    rhs = np.concatenate([m.ravel() for m in f.mats])
    x = el.solve(cols, rhs, f.p)
    if x is None:
        raise DimensionMismatch("map is not in the span of the basis")
    return x[:, 0]


class ExtSpace:
    """Ext^1(M, N) as a quotient of (+)_a Hom(M_s, N_t).

    Coset representatives are the vectors supported on the non-pivot
    columns of the RREF basis of the image of ``delta``.
    """

    def __init__(self, M: Rep, N: Rep) -> None:
        _check_same(M, N)
        self.M, self.N = M, N
        self.p = M.p
        D, self.off0, self.off1 = _hom_system(M, N)
        self.delta = D
        self.img = el.image(D, self.p)
        piv = []
        for row in self.img:
            piv.append(int(np.flatnonzero(row)[0]))
        self.pivots = tuple(piv)
        total = self.off1[-1]
        self.free = tuple(c for c in range(total) if c not in set(piv))

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def ambient(self) -> int:
        return self.off1[-1]

    def to_arrows(self, vec: Array) -> Tuple[Array, ...]:
        q = self.M.quiver
        out = []
        for k, (s, t) in enumerate(q.arrows):
            out.append(np.asarray(vec[self.off1[k] : self.off1[k + 1]]).reshape(self.N.dims[t], self.M.dims[s]))
        return tuple(out)

    def from_arrows(self, g: Sequence[Array]) -> Array:
        if not len(g):
            return np.zeros(0, dtype=np.int64)
        return np.mod(np.concatenate([np.asarray(x, dtype=np.int64).ravel() for x in g]), self.p)

    def reduce(self, vec: Array) -> Array:
        vec = np.mod(np.asarray(vec, dtype=np.int64), self.p)
        if not self.pivots:
            return vec
        return np.mod(vec - vec[list(self.pivots)] @ self.img, self.p)

    def coords(self, g) -> Array:
        """Coordinates of a cocycle (arrow tuple or flat vector)."""
        vec = g if isinstance(g, np.ndarray) and g.ndim == 1 else self.from_arrows(g)
        return self.reduce(vec)[list(self.free)]

    def representative(self, coords: Sequence[int]) -> Array:
        vec = np.zeros(self.ambient, dtype=np.int64)
        for c, x in zip(self.free, coords):
            vec[c] = x
        return np.mod(vec, self.p)

    def basis(self) -> List[Tuple[Array, ...]]:
        out = []
        for j in range(self.dim):
            e = [0] * self.dim
            e[j] = 1
            out.append(self.to_arrows(self.representative(e)))
        return out

    def is_zero(self, g) -> bool:
        return not np.any(self.coords(g))


def ext1_basis(M: Rep, N: Rep) -> List[Tuple[Array, ...]]:
    return ExtSpace(M, N).basis()


def ext1_dim(M: Rep, N: Rep) -> int:
    _check_same(M, N)
    D, _, off1 = _hom_system(M, N)
    return off1[-1] - el.rank(D, M.p)


def euler_form(q: Quiver, x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y)) - sum(x[s] * y[t] for s, t in q.arrows)


def extension_middle(M: Rep, N: Rep, g: Sequence[Array]) -> Tuple[Rep, RepMap, RepMap]:
    """Middle term W of ``0 -> N -> W -> M -> 0`` with class ``g``."""
    q = M.quiver
    dims = [N.dims[v] + M.dims[v] for v in range(q.n)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        m = el.zeros(dims[t], dims[s])
        m[: N.dims[t], : N.dims[s]] = N.maps[k]
        m[: N.dims[t], N.dims[s] :] = np.asarray(g[k]).reshape(N.dims[t], M.dims[s])
        m[N.dims[t] :, N.dims[s] :] = M.maps[k]
        maps.append(m)
    W = Rep(q, dims, maps)
    inc = RepMap(N, W, [np.vstack([el.identity(N.dims[v]), el.zeros(M.dims[v], N.dims[v])]) for v in range(q.n)], check=False)
    proj = RepMap(W, M, [np.hstack([el.zeros(M.dims[v], N.dims[v]), el.identity(M.dims[v])]) for v in range(q.n)], check=False)
    return W, inc, proj


def class_of_sequence(inc: RepMap, proj: RepMap) -> Tuple[Array, ...]:
    """Recover the cocycle of a short exact sequence ``N -> W -> M``.

    Picks a vertexwise section ``s`` of ``proj`` and measures how far it is
    from being a morphism.
    """
    N, W, M = inc.source, inc.target, proj.target
    p = M.p
    q = M.quiver
    sect = []
    for v in range(q.n):
        x = el.solve(proj.mats[v], el.identity(M.dims[v]), p) if M.dims[v] else el.zeros(W.dims[v], 0)
        if x is None:
            raise DimensionMismatch("projection is not surjective")
        sect.append(x)
    out = []
    for k, (s, t) in enumerate(q.arrows):
        h = np.mod(el.matmul(W.maps[k], sect[s], p) - el.matmul(sect[t], M.maps[k], p), p)
        g = el.solve(inc.mats[t], h, p) if h.size else el.zeros(N.dims[t], M.dims[s])
        if g is None:
            raise DimensionMismatch("sequence is not exact in the middle")
        out.append(g)
    return tuple(out)


def pushforward(psi: RepMap, g: Sequence[Array]) -> Tuple[Array, ...]:
    """Ext^1(M, N) -> Ext^1(M, N') along ``psi: N -> N'``."""
    q = psi.source.quiver
    return tuple(el.matmul(psi.mats[t], g[k], psi.p) for k, (s, t) in enumerate(q.arrows))


def pullback(phi: RepMap, g: Sequence[Array]) -> Tuple[Array, ...]:
    """Ext^1(M, N) -> Ext^1(M', N) along ``phi: M' -> M``."""
    q = phi.source.quiver
    return tuple(el.matmul(g[k], phi.mats[s], phi.p) for k, (s, t) in enumerate(q.arrows))


# -- Auslander-Reiten translation -------------------------------------------


def _nakayama_presentation_map(M: Rep) -> RepMap:
    """nu applied to the standard resolution of M."""
    q = M.quiver
    p = M.p
    inj = [injective_rep(q, i) for i in range(q.n)]
    src_parts = [tensor_space(inj[t], M.dims[s]) for s, t in q.arrows]
    tgt_parts = [tensor_space(inj[i], M.dims[i]) for i in range(q.n)]
    src = direct_sum(src_parts, q)
    tgt = direct_sum(tgt_parts, q)
    mats = []
    for v in range(q.n):
        so = offsets(src_parts, v)
        to = offsets(tgt_parts, v)
        m = el.zeros(tgt.dims[v], src.dims[v])
        for k, (s, t) in enumerate(q.arrows):
            cols = slice(so[k], so[k + 1])
            if so[k + 1] == so[k]:
                continue
            iota = _injective_arrow_map(q, k, v)
            m[to[s] : to[s + 1], cols] += np.kron(iota, el.identity(M.dims[s]))
            m[to[t] : to[t + 1], cols] -= np.kron(el.identity(inj[t].dims[v]), M.maps[k])
        mats.append(np.mod(m, p))
    return RepMap(src, tgt, mats)


def tau_raw(M: Rep) -> Rep:
    """Kernel of nu on the standard resolution; zero exactly on projectives."""
    if not M.quiver.arrows:
        return Rep.zero(M.quiver)
    return kernel_of(_nakayama_presentation_map(M))[0]


def tau_minus_raw(N: Rep) -> Rep:
    T = tau_raw(dual(N))
    return Rep(N.quiver, T.dims, [m.T for m in T.maps])


def tau(M: Rep) -> Rep:
    if M.is_zero():
        return M
    T = tau_raw(M)
    if T.is_zero():
        raise ProjectiveInput("projective module has no translate", witness=M.dims)
    return T


def tau_minus(N: Rep) -> Rep:
    if N.is_zero():
        return N
    T = tau_minus_raw(N)
    if T.is_zero():
        raise InjectiveInput("injective module has no inverse translate", witness=N.dims)
    return T


def _enumerate_span(basis: Sequence, p: int, up_to_scalar: bool = True) -> Iterator[Tuple[int, ...]]:
    """Nonzero coefficient vectors; first nonzero entry 1 when up to scalar."""
    d = len(basis)
    for coeffs in itertools.product(range(p), repeat=d):
        if not any(coeffs):
            continue
        if up_to_scalar and coeffs[next(i for i, c in enumerate(coeffs) if c)] != 1:
            continue
        yield coeffs


def combine_maps(basis: Sequence[RepMap], coeffs: Sequence[int]) -> RepMap:
    out = None
    for b, c in zip(basis, coeffs):
        if c:
            term = b.scaled(c)
            out = term if out is None else out.plus(term)
    if out is None:
        out = zero_map(basis[0].source, basis[0].target)
    return out


ENUM_LIMIT = 1 << 14


def is_isomorphic(M: Rep, N: Rep) -> bool:
    """Exact isomorphism test by searching Hom(M, N) for an invertible map."""
    if M.dims != N.dims:
        return False
    if M.is_zero():
        return True
    basis = hom_basis(M, N)
    if not basis:
        return False
    if M.p ** len(basis) > ENUM_LIMIT:
        raise DerivedEqError("Hom space too large for exhaustive isomorphism search")
    for coeffs in _enumerate_span(basis, M.p, up_to_scalar=True):
        if combine_maps(basis, coeffs).is_iso():
            return True
    return False


def is_brick(M: Rep) -> bool:
    return hom_dim(M, M) == 1


@dataclass(frozen=True)
class ARSequence:
    left: Rep
    middle: Rep
    right: Rep
    inc: RepMap
    proj: RepMap
    cls: Tuple[Array, ...]


def ar_sequence(M: Rep) -> ARSequence:
    """Almost split sequence ending at a brick M.

    For a brick, Ext^1(M, tau M) is dual to End(M) = k, so every nonzero
    class spans the socle.
    """
    T = tau(M)
    if not is_brick(M):
        raise DerivedEqError("almost split sequences are only built for bricks", witness=M.dims)
    E = ExtSpace(M, T)
    if E.dim != 1:
        raise DerivedEqError("unexpected Ext^1(M, tau M) dimension", witness=E.dim)
    g = E.basis()[0]
    W, inc, proj = extension_middle(M, T, g)
    return ARSequence(T, W, M, inc, proj, g)


# -- Dynkin gate -------------------------------------------------------------


def dynkin_type(q: Quiver) -> List[str]:
    """Dynkin labels of the connected components, or NotRepresentationFinite."""
    n = q.n
    pairs = Counter(frozenset(a) for a in q.arrows)
    if any(c > 1 for c in pairs.values()):
        raise NotRepresentationFinite("multiple edges between two vertices", witness=q.name)
    adj: Dict[int, List[int]] = {v: [] for v in range(n)}
    for s, t in q.arrows:
        adj[s].append(t)
        adj[t].append(s)
    seen = set()
    labels = []
    for start in range(n):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        edges = sum(len(adj[v]) for v in comp) // 2
        if edges != len(comp) - 1:
            raise NotRepresentationFinite("underlying graph has a cycle", witness=sorted(v + 1 for v in comp))
        branch = [v for v in comp if len(adj[v]) >= 3]
        if any(len(adj[v]) > 3 for v in comp) or len(branch) > 1:
            raise NotRepresentationFinite("not a Dynkin diagram", witness=sorted(v + 1 for v in comp))
        if not branch:
            labels.append(f"A{len(comp)}")
            continue
        c = branch[0]
        arms = []
        for w in adj[c]:
            length, prev, cur = 1, c, w
            while True:
                nxt = [x for x in adj[cur] if x != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                length += 1
            arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            labels.append(f"D{len(comp)}")
        elif arms == [1, 2, 2]:
            labels.append("E6")
        elif arms == [1, 2, 3]:
            labels.append("E7")
        elif arms == [1, 2, 4]:
            labels.append("E8")
        else:
            raise NotRepresentationFinite("not a Dynkin diagram", witness=arms)
    return labels


def tits_form(q: Quiver, x: Sequence[int]) -> int:
    return euler_form(q, x, x)


def positive_roots(q: Quiver, bound: int = 6) -> List[Tuple[int, ...]]:
    """Brute-force x >= 0, x != 0 with q(x) = 1 and entries below ``bound``."""
    out = []
    for x in itertools.product(range(bound), repeat=q.n):
        if any(x) and tits_form(q, x) == 1:
            out.append(x)
    return out


# -- the module category of a Dynkin quiver ---------------------------------


class ModCat:
    """Indecomposables in knitting order plus Hom/Ext tables.

    Ordinal ``i`` refers to ``self.ind[i]``.  Knitting order sorts
    ``tau^-k P_i`` by ``(k, position of i with sinks first)``, which makes
    the Hom matrix upper unitriangular.
    """

    def __init__(self, q: Quiver) -> None:
        self.types = dynkin_type(q)
        self.q = q
        self.p = q.field
        topo = q.topological_order()
        pos = {v: r for r, v in enumerate(reversed(topo))}
        entries = []
        for i in range(q.n):
            X = projective_rep(q, i)
            k = 0
            while not X.is_zero():
                entries.append(((k, pos[i]), i, k, X))
                X = tau_minus_raw(X)
                k += 1
                if k > 64:
                    raise NotRepresentationFinite("inverse translates do not terminate")
        entries.sort(key=lambda e: e[0])
        self.ind: List[Rep] = [e[3] for e in entries]
        self.orbit: List[Tuple[int, int]] = [(e[1], e[2]) for e in entries]
        self.m = len(self.ind)
        self.dimvecs: List[Tuple[int, ...]] = [X.dims for X in self.ind]
        self.by_dim: Dict[Tuple[int, ...], int] = {}
        for i, d in enumerate(self.dimvecs):
            if d in self.by_dim:
                raise NotRepresentationFinite("repeated dimension vector", witness=d)
            self.by_dim[d] = i
        self.hom = np.array([[hom_dim(X, Y) for Y in self.ind] for X in self.ind], dtype=np.int64)
        self.ext = np.array([[ext1_dim(X, Y) for Y in self.ind] for X in self.ind], dtype=np.int64)
        if not self._unitriangular():
            raise NotRepresentationFinite("Hom matrix is not unitriangular in knitting order")
        self.proj_vertex: List[Optional[int]] = [None] * self.m
        self.inj_vertex: List[Optional[int]] = [None] * self.m
        self.simple_vertex: List[Optional[int]] = [None] * self.m
        for v in range(q.n):
            self.proj_vertex[self.by_dim[projective_rep(q, v).dims]] = v
            self.inj_vertex[self.by_dim[injective_rep(q, v).dims]] = v
            self.simple_vertex[self.by_dim[simple_rep(q, v).dims]] = v
        self.projectives = [self.by_dim[projective_rep(q, v).dims] for v in range(q.n)]
        self.injectives = [self.by_dim[injective_rep(q, v).dims] for v in range(q.n)]
        self.simples = [self.by_dim[simple_rep(q, v).dims] for v in range(q.n)]
        self.tau_idx: List[Optional[int]] = []
        self.tau_inv_idx: List[Optional[int]] = [None] * self.m
        for i, X in enumerate(self.ind):
            if self.proj_vertex[i] is not None:
                self.tau_idx.append(None)
                continue
            j = self.identify(tau(X))
            self.tau_idx.append(j)
            self.tau_inv_idx[j] = i
        self.all: FrozenSet[int] = frozenset(range(self.m))
        self._hom_cache: Dict[Tuple[int, int], List[RepMap]] = {}
        self._ext_cache: Dict[Tuple[int, int], ExtSpace] = {}

    def _unitriangular(self) -> bool:
        for i in range(self.m):
            if self.hom[i, i] != 1:
                return False
            for j in range(i):
                if self.hom[i, j] != 0:
                    return False
        return True

    # identification and decomposition

    def identify(self, X: Rep) -> int:
        i = self.by_dim.get(X.dims)
        if i is None:
            raise DimensionMismatch("not an indecomposable dimension vector", witness=X.dims)
        return i

    def decompose(self, M: Rep) -> Counter:
        if M.quiver != self.q:
            raise DimensionMismatch("representation of another quiver")
        if M.is_zero():
            return Counter()
        h = [hom_dim(X, M) for X in self.ind]
        mult = [0] * self.m
        for i in range(self.m - 1, -1, -1):
            mult[i] = h[i] - sum(mult[j] * int(self.hom[i, j]) for j in range(i + 1, self.m))
            if mult[i] < 0:
                raise DimensionMismatch("Hom counts inconsistent with Krull-Schmidt", witness=h)
        dims = tuple(sum(mult[i] * self.dimvecs[i][v] for i in range(self.m)) for v in range(self.q.n))
        if dims != M.dims:
            raise DimensionMismatch("decomposition does not add up", witness=(dims, M.dims))
        return Counter({i: c for i, c in enumerate(mult) if c})

    # cached bases

    def hom_basis(self, i: int, j: int) -> List[RepMap]:
        key = (i, j)
        if key not in self._hom_cache:
            self._hom_cache[key] = hom_basis(self.ind[i], self.ind[j])
        return self._hom_cache[key]

    def ext_space(self, i: int, j: int) -> ExtSpace:
        key = (i, j)
        if key not in self._ext_cache:
            self._ext_cache[key] = ExtSpace(self.ind[i], self.ind[j])
        return self._ext_cache[key]

    # named objects

    def is_projective(self, i: int) -> bool:
        return self.proj_vertex[i] is not None

    def is_injective(self, i: int) -> bool:
        return self.inj_vertex[i] is not None

    def nu(self, i: int) -> int:
        v = self.proj_vertex[i]
        if v is None:
            raise DerivedEqError("Nakayama functor applied to a non-projective", witness=self.dimvecs[i])
        return self.injectives[v]

    def nu_inv(self, i: int) -> int:
        v = self.inj_vertex[i]
        if v is None:
            raise DerivedEqError("inverse Nakayama functor applied to a non-injective", witness=self.dimvecs[i])
        return self.projectives[v]

    def name(self, i: int) -> str:
        return "M(" + ",".join(str(d) for d in self.dimvecs[i]) + ")"

    def orbit_label(self, i: int) -> str:
        v, k = self.orbit[i]
        return f"P{v + 1}" if k == 0 else f"tau^-{k} P{v + 1}"

    # perpendicular categories

    def right_perp(self, S: Iterable[int], ext: bool = True) -> FrozenSet[int]:
        S = list(S)
        return frozenset(
            j for j in range(self.m) if all(self.hom[s, j] == 0 and (not ext or self.ext[s, j] == 0) for s in S)
        )

    def left_perp(self, S: Iterable[int], ext: bool = True) -> FrozenSet[int]:
        S = list(S)
        return frozenset(
            j for j in range(self.m) if all(self.hom[j, s] == 0 and (not ext or self.ext[j, s] == 0) for s in S)
        )

    def perp_in_A(self, S: Iterable[int], side: str) -> FrozenSet[int]:
        if side == "left":
            return self.left_perp(S)
        if side == "right":
            return self.right_perp(S)
        raise ValueError("side must be 'left' or 'right'")

    # traces and rejects

    def universal_from(self, C: Iterable[int], Y: Rep) -> RepMap:
        """(+)_{X in C} X (x) Hom(X, Y) -> Y."""
        parts = []
        blocks: List[List[Array]] = [[] for _ in range(self.q.n)]
        for i in sorted(C):
            for f in hom_basis(self.ind[i], Y):
                parts.append(self.ind[i])
                for v in range(self.q.n):
                    blocks[v].append(f.mats[v])
        src = direct_sum(parts, self.q)
        mats = [np.hstack(b) if b else el.zeros(Y.dims[v], 0) for v, b in enumerate(blocks)]
        return RepMap(src, Y, mats, check=False)

    def universal_to(self, Y: Rep, C: Iterable[int]) -> RepMap:
        """Y -> (+)_{X in C} X (x) Hom(Y, X)^*."""
        parts = []
        blocks: List[List[Array]] = [[] for _ in range(self.q.n)]
        for i in sorted(C):
            for f in hom_basis(Y, self.ind[i]):
                parts.append(self.ind[i])
                for v in range(self.q.n):
                    blocks[v].append(f.mats[v])
        tgt = direct_sum(parts, self.q)
        mats = [np.vstack(b) if b else el.zeros(0, Y.dims[v]) for v, b in enumerate(blocks)]
        return RepMap(Y, tgt, mats, check=False)

    def in_filt_fac(self, C: Iterable[int], Y: Rep) -> bool:
        """Y lies in the torsion class generated by C (iterated trace)."""
        C = list(C)
        while not Y.is_zero():
            tr = image_of(self.universal_from(C, Y))[1]
            if tr.source.is_zero():
                return False
            Y = cokernel_of(tr)[0]
        return True

    def in_filt_sub(self, C: Iterable[int], Y: Rep) -> bool:
        """Y lies in the torsion-free class cogenerated by C (iterated reject)."""
        C = list(C)
        while not Y.is_zero():
            K, _ = kernel_of(self.universal_to(Y, C))
            if K.total_dim == Y.total_dim:
                return False
            Y = K
        return True

    # closures

    def torsion_closure(self, gens: Iterable[int]) -> FrozenSet[int]:
        gens = list(gens)
        return frozenset(i for i in range(self.m) if self.in_filt_fac(gens, self.ind[i]))

    def torsion_closure_oracle(self, gens: Iterable[int]) -> FrozenSet[int]:
        return self.left_perp(self.right_perp(gens, ext=False), ext=False)

    def torsionfree_closure(self, gens: Iterable[int]) -> FrozenSet[int]:
        gens = list(gens)
        return frozenset(i for i in range(self.m) if self.in_filt_sub(gens, self.ind[i]))

    def torsionfree_closure_oracle(self, gens: Iterable[int]) -> FrozenSet[int]:
        return self.right_perp(self.left_perp(gens, ext=False), ext=False)

    def is_torsion_class(self, T: Iterable[int]) -> bool:
        T = frozenset(T)
        return self.torsion_closure(T) == T

    def is_torsionfree_class(self, F: Iterable[int]) -> bool:
        F = frozenset(F)
        return self.torsionfree_closure(F) == F

    def _pair_products(self, i: int, j: int) -> FrozenSet[int]:
        """Indecomposable summands of kernels, cokernels and extensions between i and j."""
        key = (min(i, j), max(i, j))
        cache = self.__dict__.setdefault("_pair_cache", {})
        if key in cache:
            return cache[key]
        out = set()
        for a, b in ((i, j), (j, i)):
            if a == b:
                continue
            basis = self.hom_basis(a, b)
            for coeffs in _enumerate_span(basis, self.p):
                f = combine_maps(basis, coeffs)
                out |= set(self.decompose(kernel_of(f)[0]))
                out |= set(self.decompose(cokernel_of(f)[0]))
            E = self.ext_space(a, b)
            for coeffs in _enumerate_span(range(E.dim), self.p):
                g = E.to_arrows(E.representative(coeffs))
                out |= set(self.decompose(extension_middle(self.ind[a], self.ind[b], g)[0]))
        res = frozenset(out)
        cache[key] = res
        return res

    def wide_closure(self, gens: Iterable[int]) -> FrozenSet[int]:
        cur = set(gens)
        while True:
            new = set(cur)
            for i, j in itertools.combinations_with_replacement(sorted(cur), 2):
                new |= self._pair_products(i, j)
            if new == cur:
                return frozenset(cur)
            cur = new

    def wide_closure_oracle(self, gens: Iterable[int]) -> FrozenSet[int]:
        return self.left_perp(self.right_perp(gens))

    def is_wide(self, W: Iterable[int]) -> bool:
        W = frozenset(W)
        return self.wide_closure(W) == W

    def enumerate_torsion_classes(self) -> List[FrozenSet[int]]:
        seen = set()
        for r in range(self.m + 1):
            for gens in itertools.combinations(range(self.m), r):
                seen.add(self.torsion_closure_oracle(gens))
        return sorted(seen, key=lambda s: (len(s), sorted(s)))

    # classes relative to a wide subcategory

    def in_torsion_class_of(self, t: Iterable[int], W: Iterable[int]) -> bool:
        """t is a torsion class of the abelian category W."""
        t, W = frozenset(t), frozenset(W)
        if not t <= W:
            return False
        return all(not self.in_filt_fac(t, self.ind[y]) for y in W - t)

    def is_tilting_in(self, t: Iterable[int], W: Iterable[int]) -> bool:
        """Every object of W embeds into an object of add t."""
        t = list(t)
        for y in W:
            K, _ = kernel_of(self.universal_to(self.ind[y], t))
            if not K.is_zero():
                return False
        return True

    def ext_projectives_of(self, t: Iterable[int]) -> FrozenSet[int]:
        t = frozenset(t)
        return frozenset(i for i in t if all(self.ext[i, j] == 0 for j in t))


@lru_cache(maxsize=32)
def modcat(q: Quiver) -> ModCat:
    return ModCat(q)


def enumerate_indecomposables(q: Quiver) -> List[Rep]:
    return list(modcat(q).ind)


def decompose(M: Rep) -> Counter:
    return modcat(M.quiver).decompose(M)
