"""Aisles of the derived category of a Dynkin quiver.

An aisle U is stored by its cohomology sequence ``N(n) = H^{-n}(U)``, a set
of indecomposable ordinals per degree of a window ``[lo, hi]``.  Outside the
window ``N`` is empty below (when ``below_zero``) and everything above (when
``above_full``); with a flag unset, queries outside the window raise
WindowOverflow.  Because the algebra is hereditary, an object lies in U iff
each of its stalks ``M[n]`` has ``M in N(n)``.

Whether a monotone sequence really is an aisle is decided locally: for each
degree ``k`` we need ``U = perp(U perp)`` on stalks of degree ``k`` and a
truncation triangle for every stalk ``M[k]``; both depend only on
``N(k-1), N(k), N(k+1)``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import repcat as rc
from .derivedcat import DerivedCat, DMap, DObj, Piece, Stalk
from .errors import (
    DerivedEqError,
    EmptyGenerators,
    HasExtProjectives,
    InvalidSequence,
    NotATorsionTheory,
    OracleDisagreement,
    SearchBoundExceeded,
    UnboundedAisle,
    WindowOverflow,
)

Window = Tuple[int, int]
EMPTY: FrozenSet[int] = frozenset()


class Aisle:
    def __init__(
        self,
        cat: DerivedCat,
        window: Window,
        n_seq: Sequence[Iterable[int]],
        below_zero: bool = True,
        above_full: bool = True,
    ) -> None:
        lo, hi = window
        if hi < lo:
            raise WindowOverflow("empty window", witness=window)
        seq = tuple(frozenset(s) for s in n_seq)
        if len(seq) != hi - lo + 1:
            raise InvalidSequence("one member set per degree of the window", witness=len(seq))
        for k in range(len(seq) - 1):
            if not seq[k] <= seq[k + 1]:
                raise InvalidSequence("N(n) must be contained in N(n+1)", witness=lo + k)
        if not seq[0]:
            below_zero = True
        if seq[-1] == cat.A.all:
            above_full = True
        self.cat = cat
        self.window = (lo, hi)
        self.n_seq = seq
        self.below_zero = below_zero
        self.above_full = above_full

    @property
    def lo(self) -> int:
        return self.window[0]

    @property
    def hi(self) -> int:
        return self.window[1]

    def N(self, n: int) -> FrozenSet[int]:
        if n < self.lo:
            if self.below_zero:
                return EMPTY
            raise WindowOverflow(f"degree {n} below the window", witness=n)
        if n > self.hi:
            if self.above_full:
                return self.cat.A.all
            raise WindowOverflow(f"degree {n} above the window", witness=n)
        return self.n_seq[n - self.lo]

    def key(self) -> tuple:
        return (self.cat.q, self.window, self.n_seq, self.below_zero, self.above_full)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Aisle) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        body = ", ".join(f"{n}:{sorted(self.N(n))}" for n in range(self.lo, self.hi + 1))
        return f"Aisle({body})"

    def is_bounded(self) -> bool:
        return self.below_zero and self.above_full

    def shifted(self, k: int) -> "Aisle":
        """U[k]: the aisle with N'(n) = N(n - k)."""
        return Aisle(self.cat, (self.lo + k, self.hi + k), self.n_seq, self.below_zero, self.above_full)

    def with_window(self, window: Window) -> "Aisle":
        lo, hi = window
        return Aisle(self.cat, window, [self.N(n) for n in range(lo, hi + 1)], self.below_zero, self.above_full)

    def to_json(self) -> dict:
        A = self.cat.A
        return {
            "window": [self.lo, self.hi],
            "n_seq": [
                {"n": n, "members": [list(A.dimvecs[i]) for i in sorted(self.N(n))]}
                for n in range(self.lo, self.hi + 1)
            ],
            "flags": {"below_zero": self.below_zero, "above_full": self.above_full},
        }

    def ident(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


# -- stalk-level membership ---------------------------------------------------


def in_aisle(a: Aisle, x: Stalk) -> bool:
    return x[0] in a.N(x[1])


def in_perp(a: Aisle, x: Stalk) -> bool:
    """x lies in U^perp: no maps from any aisle stalk."""
    A = a.cat.A
    i, s = x
    return all(A.hom[g, i] == 0 for g in a.N(s)) and all(A.ext[g, i] == 0 for g in a.N(s - 1))


def in_coaisle(a: Aisle, x: Stalk) -> bool:
    """x lies in V = U^perp[1], i.e. Hom(U[1], x) = 0."""
    return in_perp(a, (x[0], x[1] - 1))


def member(a: Aisle, X: DObj) -> bool:
    return all(in_aisle(a, x) for x in X)


def comember(a: Aisle, X: DObj) -> bool:
    return all(in_coaisle(a, x) for x in X)


def member_by_dhom(a: Aisle, x: Stalk) -> bool:
    """x in U iff Hom(x, Y) = 0 for every stalk Y of U^perp (perp of perp)."""
    cat = a.cat
    for s in (x[1], x[1] + 1):
        for j in range(cat.m):
            if in_perp(a, (j, s)) and cat.dhom_stalk(x, (j, s)):
                return False
    return True


def comember_by_dhom(a: Aisle, x: Stalk) -> bool:
    """x in V by direct scan: dhom(G[1], x) = 0 for aisle stalks G."""
    cat = a.cat
    for s in (x[1] - 1, x[1] - 2):
        for g in a.N(s):
            if cat.dhom_stalk((g, s + 1), x):
                return False
    return True


# -- truncation --------------------------------------------------------------


@dataclass
class Truncation:
    aisle_part: DObj
    obj: DObj
    perp_part: DObj
    approx: DMap
    junk: DObj


def approximation(cat: DerivedCat, Nk: Iterable[int], Nkm1: Iterable[int], target: Piece) -> DMap:
    """Universal map from aisle stalks of degrees k and k-1 to ``target``."""
    k = target.shift
    src: List[Piece] = []
    blocks: Dict[Tuple[int, int], object] = {}
    for deg, members in ((k, Nk), (k - 1, Nkm1)):
        for g in sorted(members):
            a = Piece(cat.A.ind[g], deg)
            for blk in cat.basis_pieces(a, target):
                blocks[(len(src), 0)] = blk
                src.append(a)
    return DMap(src, [target], blocks)


def truncate_piece(a: Aisle, target: Piece) -> Truncation:
    """Truncation triangle of a (possibly decomposable) shifted module.

    The universal approximation ``u: A -> M[k]`` has cone ``B (+) J`` where
    ``J`` is a sum of aisle stalks (coming from the superfluous part of A)
    and B must lie in U^perp.  Raises InvalidSequence when that fails.
    """
    cat = a.cat
    k = target.shift
    u = approximation(cat, a.N(k), a.N(k - 1), target)
    Z = cat.cone(u)
    J = DObj(tuple(z for z in Z if in_aisle(a, z)))
    B = DObj(tuple(z for z in Z if not in_aisle(a, z)))
    bad = [z for z in B if not in_perp(a, z)]
    if bad:
        raise InvalidSequence("stalk has no truncation triangle", witness={"degree": k, "stalk": bad[0]})
    src = cat.to_dobj(u.src)
    try:
        XU = src.minus(J.shift(-1))
    except DerivedEqError:
        raise InvalidSequence("aisle part of the cone is not superfluous", witness=k)
    obj = cat.to_dobj([target])
    return Truncation(XU, obj, B, u, J)


def truncate(a: Aisle, X: DObj) -> Tuple[DObj, DObj, DObj]:
    """(X_U, X, X^{V[-1]}) computed stalk by stalk."""
    up, down = DObj(), DObj()
    for x in X:
        t = truncate_piece(a, a.cat.piece(x))
        up = up + t.aisle_part
        down = down + t.perp_part
    return up, X, down


def truncate_oracle(a: Aisle, X: DObj) -> DObj:
    """X_U from Hom counts: dim Hom(G, X_U) = dim Hom(G, X) for aisle stalks G."""
    cat = a.cat
    shifts = X.shifts()
    counts = {}
    for s in range(min(shifts, default=0) - 1, max(shifts, default=0) + 1):
        for g in a.N(s):
            counts[(g, s)] = cat.dhom(DObj.stalk(g, s), X)
    return cat.solve_counts(counts)


def stalk_truncations_valid(a: Aisle, k: int) -> Optional[dict]:
    """None if every stalk of degree k truncates, else a witness."""
    for i in range(a.cat.m):
        try:
            truncate_piece(a, a.cat.piece((i, k)))
        except InvalidSequence as exc:
            return exc.witness
    return None


def perp_closed_at(a: Aisle, k: int) -> Optional[Stalk]:
    """Stalk of degree k where N and perp(U perp) disagree, if any."""
    for i in range(a.cat.m):
        if in_aisle(a, (i, k)) != member_by_dhom(a, (i, k)):
            return (i, k)
    return None


def check_degree(a: Aisle, k: int) -> Optional[dict]:
    w = perp_closed_at(a, k)
    if w is not None:
        return {"degree": k, "stalk": w, "reason": "not closed as perp of perp"}
    w2 = stalk_truncations_valid(a, k)
    if w2 is not None:
        return {"degree": k, "reason": "no truncation", "detail": w2}
    return None


def aisle_violation(a: Aisle) -> Optional[dict]:
    hi = a.hi + 1 if a.above_full else a.hi - 1
    lo = a.lo if a.below_zero else a.lo + 1
    for k in range(lo, hi + 1):
        w = check_degree(a, k)
        if w is not None:
            return w
    return None


def is_valid_aisle(a: Aisle) -> bool:
    return aisle_violation(a) is None


def validate(a: Aisle) -> Aisle:
    w = aisle_violation(a)
    if w is not None:
        raise InvalidSequence("sequence does not define an aisle", witness=w)
    return a


# -- constructors -------------------------------------------------------------


def aisle_standard(cat: DerivedCat, window: Window) -> Aisle:
    lo, hi = window
    if not lo <= 0 <= hi:
        raise WindowOverflow("window must contain 0", witness=window)
    return Aisle(cat, window, [cat.A.all if n >= 0 else EMPTY for n in range(lo, hi + 1)])


def aisle_from_torsion_pair(
    cat: DerivedCat, T: Iterable[int], F: Optional[Iterable[int]], window: Window
) -> Aisle:
    """HRS aisle: N(n) = 0 for n < 0, N(0) = T, N(n) = all for n > 0."""
    A = cat.A
    T = frozenset(T)
    F = A.right_perp(T, ext=False) if F is None else frozenset(F)
    check_torsion_pair(A, T, F)
    lo, hi = window
    if not lo <= 0 <= hi:
        raise WindowOverflow("window must contain 0", witness=window)
    return Aisle(cat, window, [EMPTY if n < 0 else (T if n == 0 else A.all) for n in range(lo, hi + 1)])


def check_torsion_pair(A: rc.ModCat, T: FrozenSet[int], F: FrozenSet[int]) -> None:
    for t in T:
        for f in F:
            if A.hom[t, f]:
                raise NotATorsionTheory("Hom(T, F) is nonzero", witness=[A.dimvecs[t], A.dimvecs[f]])
    for i, X in enumerate(A.ind):
        tr = rc.image_of(A.universal_from(T, X))[1]
        top = A.decompose(tr.source)
        quo = A.decompose(rc.cokernel_of(tr)[0])
        if not set(top) <= T or not set(quo) <= F:
            raise NotATorsionTheory("module without a torsion filtration", witness=A.dimvecs[i])


def _gens_perp(cat: DerivedCat, gens: Sequence[Stalk], y: Stalk, full_from: Optional[int]) -> bool:
    """y lies in the right perp of all nonnegative shifts of gens."""
    A = cat.A
    j, s = y
    if full_from is not None and s >= full_from:
        return False
    for g, b in gens:
        if s >= b and A.hom[g, j]:
            return False
        if s >= b + 1 and A.ext[g, j]:
            return False
    return True


def generated_N(cat: DerivedCat, gens: Sequence[Stalk], n: int, full_from: Optional[int] = None) -> FrozenSet[int]:
    """N(n) of perp(gens[>=0] perp), from Hom/Ext tables only.

    ``full_from`` adds every indecomposable in degrees >= full_from to the
    generators.
    """
    A = cat.A
    right_n = [j for j in range(cat.m) if _gens_perp(cat, gens, (j, n), full_from)]
    right_n1 = [j for j in range(cat.m) if _gens_perp(cat, gens, (j, n + 1), full_from)]
    return frozenset(
        i for i in range(cat.m) if all(A.hom[i, j] == 0 for j in right_n) and all(A.ext[i, j] == 0 for j in right_n1)
    )


def preaisle_fixpoint(
    cat: DerivedCat, gens: Sequence[Stalk], lo: int, top: int, full_from: Optional[int] = None
) -> Dict[int, FrozenSet[int]]:
    """Least set of stalks in degrees [lo, top] closed under shift and cones.

    New members are the summands of ``cone(h: X[-1] -> Z)`` for a member X
    and a sum Z of at most two members with ``Hom(X[-1], z) != 0`` for each
    summand z; this covers extensions, kernels and cokernels.  Degree
    ``top + 1`` is treated as a copy of degree ``top`` (or as everything
    when ``full_from`` says so).
    """
    A = cat.A
    N: Dict[int, set] = {n: set() for n in range(lo, top + 1)}
    for g, b in gens:
        if b < lo:
            raise WindowOverflow("generator below the window", witness=(g, b))
        for n in range(max(b, lo), top + 1):
            N[n].add(g)
    if full_from is not None:
        for n in range(max(full_from, lo), top + 1):
            N[n] = set(range(cat.m))
    done = set()
    changed = True
    while changed:
        changed = False
        for n in range(lo, top):
            if not N[n] <= N[n + 1]:
                N[n + 1] |= N[n]
                changed = True

        def members(n: int) -> set:
            if n < lo:
                return set()
            if n > top:
                return set(range(cat.m)) if full_from is not None and n >= full_from else N[top]
            return N[n]

        for k in range(lo, top + 2):
            for x in sorted(members(k)):
                X = cat.piece((x, k - 1))
                cands = [(z, k - 1) for z in members(k - 1) if A.hom[x, z]] + [(z, k) for z in members(k) if A.ext[x, z]]
                combos = [(c,) for c in cands] + list(itertools.combinations_with_replacement(cands, 2))
                for combo in combos:
                    key = ((x, k), combo, tuple(sorted(members(k - 1))), tuple(sorted(members(k))))
                    if key in done:
                        continue
                    done.add(key)
                    Z = [cat.piece(z) for z in combo]
                    basis = cat.basis_maps([X], Z)
                    for coeffs in rc._enumerate_span(basis, cat.p):
                        h = cat.combine(basis, coeffs)
                        for i, s in cat.cone(h):
                            if lo <= s <= top and i not in N[s]:
                                N[s].add(i)
                                changed = True
    return {n: frozenset(v) for n, v in N.items()}


def aisle_from_generators(cat: DerivedCat, gens: Sequence[DObj], window: Window, check: bool = True) -> Aisle:
    """Smallest aisle containing ``gens``."""
    stalks = sorted({s for G in gens for s in G}, key=lambda s: (s[1], s[0]))
    if not stalks:
        raise EmptyGenerators("no generators given")
    lo, hi = window
    if any(not lo <= s <= hi for _, s in stalks):
        raise WindowOverflow("generators outside the window", witness=[list(x) for x in stalks])
    maxb = max(s for _, s in stalks)
    seq = [generated_N(cat, stalks, n) for n in range(lo, hi + 1)]
    beyond = generated_N(cat, stalks, max(maxb + 1, hi + 1))
    above_full = beyond == cat.A.all
    if not above_full and seq[-1] != beyond:
        raise WindowOverflow("closure does not stabilise inside the window", witness=hi)
    a = Aisle(cat, window, seq, True, above_full)
    if check:
        top = max(hi, maxb + 1) + 1
        fix = preaisle_fixpoint(cat, stalks, lo, top)
        for n in range(lo, hi + 1):
            if fix[n] != a.N(n):
                raise OracleDisagreement("cone closure and perp closure differ", witness=n)
        validate(a)
    return a


# -- refined t-sequences -----------------------------------------------------


@dataclass(frozen=True)
class RefinedTSeq:
    """(W(n), t(n)) on a window; W = t = 0 below, W = all and t = 0 above."""

    window: Window
    w_seq: Tuple[FrozenSet[int], ...]
    t_seq: Tuple[FrozenSet[int], ...]
    full: FrozenSet[int]

    def W(self, n: int) -> FrozenSet[int]:
        lo, hi = self.window
        if n < lo:
            return EMPTY
        if n > hi:
            return self.full
        return self.w_seq[n - lo]

    def t(self, n: int) -> FrozenSet[int]:
        lo, hi = self.window
        if n < lo or n > hi:
            return EMPTY
        return self.t_seq[n - lo]

    def to_json(self, cat: DerivedCat) -> dict:
        dv = cat.A.dimvecs
        lo, hi = self.window
        return {
            "window": [lo, hi],
            "slices": [
                {"n": n, "W": [list(dv[i]) for i in sorted(self.W(n))], "t": [list(dv[i]) for i in sorted(self.t(n))]}
                for n in range(lo, hi + 1)
            ],
        }


def refined_sequence(a: Aisle) -> RefinedTSeq:
    if not a.is_bounded():
        raise UnboundedAisle("refined sequences are read off bounded aisles")
    A = a.cat.A
    lo, hi = a.lo, a.hi + 1
    ws, ts = [], []
    for n in range(lo, hi + 1):
        W = A.wide_closure(a.N(n))
        prev = A.wide_closure(a.N(n - 1))
        ws.append(W)
        ts.append(a.N(n) & A.left_perp(prev))
    return RefinedTSeq((lo, hi), tuple(ws), tuple(ts), A.all)


def sequence_violation(cat: DerivedCat, seq: RefinedTSeq) -> Optional[dict]:
    A = cat.A
    lo, hi = seq.window
    for n in range(lo - 1, hi + 2):
        W = seq.W(n)
        if not A.is_wide(W):
            return {"n": n, "reason": "W(n) is not wide"}
        if not seq.W(n - 1) <= W:
            return {"n": n, "reason": "W is not monotone"}
        slice_ = W & A.left_perp(seq.W(n - 1))
        t = seq.t(n)
        if not t <= slice_:
            return {"n": n, "reason": "t(n) leaves its slice"}
        if not A.in_torsion_class_of(t, slice_):
            return {"n": n, "reason": "t(n) is not a torsion class in its slice"}
        if not A.is_tilting_in(t, slice_):
            return {"n": n, "reason": "t(n) is not tilting in its slice"}
    return None


def aisle_from_refined_sequence(cat: DerivedCat, seq: RefinedTSeq, window: Window, check: bool = True) -> Aisle:
    """Smallest aisle containing t(n)[n] and W(n)[n+1] for all n."""
    bad = sequence_violation(cat, seq)
    if bad is not None:
        raise InvalidSequence("invalid refined t-sequence", witness=bad)
    slo, shi = seq.window
    gens: List[Stalk] = []
    for n in range(slo, shi + 1):
        gens += [(i, n) for i in seq.t(n)]
        gens += [(i, n + 1) for i in seq.W(n)]
    full_from = shi + 2
    lo, hi = window
    if gens and min(s for _, s in gens) < lo:
        raise WindowOverflow("sequence starts below the window", witness=window)
    seqN = [generated_N(cat, gens, n, full_from) for n in range(lo, hi + 1)]
    beyond = generated_N(cat, gens, max(hi + 1, full_from), full_from)
    above_full = beyond == cat.A.all
    if any(generated_N(cat, gens, n, full_from) != cat.A.all for n in range(hi + 1, full_from + 1)):
        raise WindowOverflow("aisle is not full above the window", witness=window)
    a = Aisle(cat, window, seqN, True, above_full)
    if check:
        top = max(hi, full_from)
        fix = preaisle_fixpoint(cat, gens, lo, top, full_from)
        for n in range(lo, hi + 1):
            if fix[n] != a.N(n):
                raise OracleDisagreement("cone closure and perp closure differ", witness=n)
        for n in range(lo, hi + 1):
            for i in range(cat.m):
                if (i in a.N(n)) != recover_membership(cat, seq, i, n):
                    raise OracleDisagreement("membership differs from the triangle criterion", witness=(i, n))
    return a


def recover_membership(cat: DerivedCat, seq: RefinedTSeq, i: int, n: int) -> bool:
    """X in N(n) iff A -> X -> B with A in t(n) and B in Db W(n-1).

    Uses the universal map from t(n); its cone is B plus superfluous
    t(n)-stalks in shift one.
    """
    A = cat.A
    t = seq.t(n)
    Wp = seq.W(n - 1)
    target = Piece(A.ind[i], 0)
    src: List[Piece] = []
    blocks: Dict[Tuple[int, int], object] = {}
    for g in sorted(t):
        for blk in A.hom_basis(g, i):
            blocks[(len(src), 0)] = blk
            src.append(Piece(A.ind[g], 0))
    Z = cat.cone(DMap(src, [target], blocks)) if src else DObj.stalk(i, 0)
    for j, s in Z:
        if j in Wp:
            continue
        if s == 1 and j in t:
            continue
        return False
    return True


# -- hearts ------------------------------------------------------------------


@dataclass
class Heart:
    members: List[Stalk]
    hom: List[List[int]]
    ext: List[List[int]]

    def to_json(self, cat: DerivedCat) -> dict:
        return {
            "members": [cat.format(DObj.stalk(*x)) for x in self.members],
            "hom": self.hom,
            "ext1": self.ext,
        }


def heart_members(a: Aisle) -> List[Stalk]:
    if not a.is_bounded():
        raise UnboundedAisle("the heart is computed for bounded aisles")
    out = []
    for n in range(a.lo, a.hi + 2):
        for i in sorted(a.N(n)):
            if in_coaisle(a, (i, n)):
                out.append((i, n))
    return out


def heart(a: Aisle) -> Heart:
    cat = a.cat
    mem = heart_members(a)
    hom = [[cat.dhom_stalk(x, y) for y in mem] for x in mem]
    ext = [[cat.dhom_stalk(x, (y[0], y[1] + 1)) for y in mem] for x in mem]
    return Heart(mem, hom, ext)


def h_zero(a: Aisle, X: DObj) -> DObj:
    """H^0_U(X) = ((X)_U)^V, checked against ((X)^V)_U."""
    up = a.shifted(1)
    XU, _, _ = truncate(a, X)
    _, _, first = truncate(up, XU)
    _, _, XV = truncate(up, X)
    second, _, _ = truncate(a, XV)
    if first != second:
        raise OracleDisagreement("the two truncation orders disagree", witness=(first.stalks, second.stalks))
    return first


def h_n(a: Aisle, X: DObj, n: int) -> DObj:
    return h_zero(a, X.shift(n))


def is_heart_epi(a: Aisle, f: DMap) -> bool:
    return member(a.shifted(1), a.cat.cone(f))


def is_heart_mono(a: Aisle, f: DMap) -> bool:
    return comember(a, a.cat.cone(f))


def heart_simples(a: Aisle, members: Optional[List[Stalk]] = None) -> List[Stalk]:
    """Heart members all of whose nonzero maps in from the heart are epi."""
    cat = a.cat
    mem = heart_members(a) if members is None else members
    out = []
    for x in mem:
        simple = True
        for y in mem:
            basis = cat.basis_maps([cat.piece(y)], [cat.piece(x)])
            for coeffs in rc._enumerate_span(basis, cat.p):
                if not is_heart_epi(a, cat.combine(basis, coeffs)):
                    simple = False
                    break
            if not simple:
                break
        if simple:
            out.append(x)
    return out


# -- Ext-projectives, boundedness, Serre closure -------------------------------


def ext_projectives(a: Aisle) -> List[Stalk]:
    if not a.is_bounded():
        raise UnboundedAisle("Ext-projectives are listed for bounded aisles")
    A = a.cat.A
    out = []
    for n in range(a.lo, a.hi + 2):
        for i in sorted(a.N(n)):
            if all(A.hom[i, g] == 0 for g in a.N(n - 1)) and all(A.ext[i, g] == 0 for g in a.N(n)):
                out.append((i, n))
    return out


def ext_projectives_from_sequence(a: Aisle) -> List[Stalk]:
    """(+)_n (t(n)-projectives)[n]."""
    A = a.cat.A
    seq = refined_sequence(a)
    lo, hi = seq.window
    out = []
    for n in range(lo, hi + 1):
        out += [(i, n) for i in sorted(A.ext_projectives_of(seq.t(n)))]
    return out


def is_bounded(a: Aisle) -> bool:
    return a.is_bounded()


def serre_witnesses(a: Aisle) -> List[dict]:
    """Stalks M[n] of U whose Serre image leaves U."""
    cat = a.cat
    hi = a.hi + 1 if a.above_full else a.hi
    out = []
    for n in range(a.lo, hi + 1):
        for i in sorted(a.N(n)):
            img = cat.serre_stalk((i, n))
            try:
                ok = in_aisle(a, img)
            except WindowOverflow:
                ok = False
            if not ok:
                out.append({"object": (i, n), "image": img})
    return out


def is_serre_closed(a: Aisle) -> bool:
    return not serre_witnesses(a)


def is_serre_closed_direct(a: Aisle) -> bool:
    """Apply S to every aisle stalk in range instead of the tau/nu rule."""
    cat = a.cat
    hi = a.hi + 1 if a.above_full else a.hi
    for n in range(a.lo, hi + 1):
        for i in a.N(n):
            if not member(a, cat.serre(DObj.stalk(i, n))):
                return False
    return True


# -- approximating aisles and weight decompositions ----------------------------


def approximating_aisle(a: Aisle, mode: str = "maximal") -> Aisle:
    if not a.is_bounded():
        raise UnboundedAisle("approximating aisles need a bounded aisle")
    cat = a.cat
    A = cat.A
    seq = refined_sequence(a)
    lo, hi = seq.window
    if mode == "projective-free":
        if ext_projectives(a):
            raise HasExtProjectives("aisle has Ext-projective objects", witness=ext_projectives(a)[0])
    elif mode != "maximal":
        raise ValueError("mode is 'maximal' or 'projective-free'")
    ts = []
    for n in range(lo, hi + 1):
        slice_ = seq.W(n) & A.left_perp(seq.W(n - 1))
        if mode == "maximal":
            ts.append(slice_)
        else:
            projs = A.ext_projectives_of(slice_)
            ts.append(frozenset(x for x in slice_ if all(A.hom[x, P] == 0 for P in projs)))
    new = RefinedTSeq(seq.window, seq.w_seq, tuple(ts), seq.full)
    Y = aisle_from_refined_sequence(cat, new, a.window)
    shift_i = 1 if mode == "maximal" else 0
    for n in range(a.lo, a.hi + 2):
        for i in range(cat.m):
            if in_aisle(a, (i, n)) and not in_aisle(Y, (i, n)):
                raise OracleDisagreement("U is not contained in Y", witness=(i, n))
            if in_aisle(Y, (i, n - 1)) and not in_aisle(a, (i, n)):
                raise OracleDisagreement("Y[1] is not contained in U", witness=(i, n))
    if is_serre_closed(a):
        for n in range(a.lo, a.hi + 2):
            for i in Y.N(n - shift_i):
                if not member(a, cat.serre(DObj.stalk(i, n))):
                    raise OracleDisagreement("S Y[i] is not contained in U", witness=(i, n))
    return Y


def in_weight_left(a: Aisle, x: Stalk) -> bool:
    """x lies in S^-1 V [-1], i.e. S(x)[1] lies in V."""
    i, n = a.cat.serre_stalk(x)
    return in_coaisle(a, (i, n + 1))


def weight_truncate(a: Aisle, C: DObj, cap: int = 3) -> Tuple[DObj, DObj, DObj]:
    """A triangle X -> C -> Y -> X[1] with Y in U and X in S^-1 V[-1]."""
    if not a.is_bounded():
        raise UnboundedAisle("weight decompositions need a bounded aisle")
    cat = a.cat
    if member(a, C):
        return DObj(), C, C
    if all(in_weight_left(a, x) for x in C):
        return C, C, DObj()
    cands = sorted(
        {(j, s) for x in C for s in (x[1], x[1] + 1) for j in a.N(s) if cat.dhom_stalk(x, (j, s))},
        key=lambda y: (y[1], y[0]),
    )
    src = cat.pieces(C)
    for size in range(1, cap + 1):
        for Ys in itertools.combinations_with_replacement(cands, size):
            tgt = [cat.piece(y) for y in Ys]
            basis = cat.basis_maps(src, tgt)
            for coeffs in rc._enumerate_span(basis, cat.p):
                g = cat.combine(basis, coeffs)
                X = cat.cone(g).shift(-1)
                if all(in_weight_left(a, x) for x in X):
                    return X, C, DObj.of(Ys)
    raise SearchBoundExceeded("no weight decomposition within the search cap", witness=cap)
