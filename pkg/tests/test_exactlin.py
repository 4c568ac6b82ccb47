import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivedeq import exactlin as el
from derivedeq.errors import CycleError, DimensionMismatch, ParseError, RangeError


def brute_image_size(a, p):
    n = a.shape[1]
    seen = set()
    for x in itertools.product(range(p), repeat=n):
        seen.add(tuple(np.mod(a @ np.array(x, dtype=np.int64), p)))
    return len(seen)


def brute_kernel_size(a, p):
    n = a.shape[1]
    return sum(1 for x in itertools.product(range(p), repeat=n) if not np.any(np.mod(a @ np.array(x), p)))


@st.composite
def matrices(draw, max_rows=12, max_cols=12, primes=(2, 3, 5, 7)):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


def test_primes():
    assert [x for x in range(20) if el.is_prime(x)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(RangeError):
        el.check_prime(4)


def test_identity_and_zero():
    assert el.solve_linear(el.FpMatrix(np.eye(3, dtype=int), 2), "rank") == 3
    assert el.solve_linear(el.FpMatrix(np.eye(3, dtype=int), 2), "kernel").rows == 0
    z = el.FpMatrix(np.zeros((2, 3), dtype=int), 2)
    assert el.solve_linear(z, "rank") == 0
    assert el.solve_linear(z, "kernel").rows == 3


def test_all_ones_over_f2():
    a = el.FpMatrix([[1, 1], [1, 1]], 2)
    assert a.rank() == 1
    assert a.kernel() == el.FpMatrix([[1, 1]], 2)


def test_solve_and_mismatch():
    a = el.FpMatrix([[1, 2], [0, 1]], 3)
    x = el.solve_linear(a, "solve", el.FpMatrix([[1], [1]], 3))
    assert (a @ x) == el.FpMatrix([[1], [1]], 3)
    with pytest.raises(DimensionMismatch):
        el.solve_linear(a, "solve", el.FpMatrix([[1]], 3))
    assert el.solve(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 2) is None


def test_inverse_and_scalars():
    a = np.array([[2, 1], [1, 1]])
    inv = el.inverse(a, 5)
    assert np.array_equal(el.matmul(a, inv, 5), np.eye(2, dtype=np.int64))
    s = el.FpScalar(3, 7)
    assert (s * s.inverse()).value == 1
    assert (s + el.FpScalar(5, 7)).value == 1


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_nullity(ap):
    a, p = ap
    k = el.kernel(a, p)
    assert el.rank(a, p) + k.shape[0] == a.shape[1]
    if k.size:
        assert not np.any(np.mod(a @ k.T, p))


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=4, max_cols=4, primes=(2, 3)))
def test_rank_matches_brute_force(ap):
    a, p = ap
    r = el.rank(a, p)
    assert brute_image_size(a, p) == p**r
    assert brute_kernel_size(a, p) == p ** (a.shape[1] - r)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=6, max_cols=6), st.randoms(use_true_random=False))
def test_rank_invariant_under_row_operations(ap, rnd):
    a, p = ap
    if a.shape[0] < 2:
        return
    b = a.copy()
    for _ in range(5):
        i, j = rnd.sample(range(a.shape[0]), 2)
        b[i] = np.mod(b[i] + rnd.randrange(p) * b[j], p)
    assert el.rank(a, p) == el.rank(b, p)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=6, max_cols=6))
def test_rref_is_canonical(ap):
    a, p = ap
    m1, piv1 = el.rref(a, p)
    m2, piv2 = el.rref(m1, p)
    assert np.array_equal(m1, m2) and piv1 == piv2
    assert np.array_equal(el.kernel(a, p), el.kernel(a.copy(), p))
    for r, c in enumerate(piv1):
        assert m1[r, c] == 1
        assert not np.any(np.delete(m1[:, c], r))


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=6, max_cols=6))
def test_solve_finds_solutions_of_consistent_systems(ap):
    a, p = ap
    if a.shape[1] == 0:
        return
    x0 = np.arange(a.shape[1]) % p
    b = np.mod(a @ x0, p)
    x = el.solve(a, b, p)
    assert x is not None
    assert np.array_equal(np.mod(a @ x[:, 0], p), b)


# -- quiver files ----------------------------------------------------------------

A2_TEXT = "vertices: 2\narrows:\n  a: 1 -> 2\n"


def test_parse_smallest_quiver():
    q = el.parse_quiver(A2_TEXT)
    assert q.n == 2 and q.arrows == ((0, 1),) and q.labels == ("a",) and q.field == 2


def test_parse_cycle_has_witness():
    with pytest.raises(CycleError) as exc:
        el.parse_quiver("vertices: 2\narrows:\n a: 1 -> 2\n b: 2 -> 1\n")
    assert exc.value.witness == [1, 2, 1]


def test_parse_noyy(noyy):
    assert noyy.n == 3 and len(noyy.arrows) == 3
    assert noyy.topological_order() == [0, 1, 2]


@pytest.mark.parametrize(
    "text, line",
    [
        ("vertices: 2\narrows:\n a: 1 => 2\n", 3),
        ("vertices: x\narrows:\n", 1),
        ("vertices: 2\n a: 1 -> 2\n", 2),
        ("vertices: 2\narrows:\n a: 1 -> 2\n a: 1 -> 2\n", 4),
        ("field: 4\nvertices: 2\narrows:\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        el.parse_quiver(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_parse_range_error():
    with pytest.raises(RangeError):
        el.parse_quiver("vertices: 2\narrows:\n a: 1 -> 3\n")


def test_comments_and_field():
    q = el.parse_quiver("# header\nname: X  # trailing\nfield: 3\nvertices: 1\narrows:\n")
    assert q.name == "X" and q.field == 3 and q.arrows == ()


@st.composite
def dags(draw):
    n = draw(st.integers(1, 6))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=8)) if pairs else []
    perm = draw(st.permutations(range(n)))
    arrows = tuple((perm[i], perm[j]) for i, j in chosen)
    labels = tuple(f"a{k}" for k in range(len(arrows)))
    p = draw(st.sampled_from([2, 3, 5]))
    return el.Quiver(n, arrows, labels, "Q", p)


@settings(max_examples=100, deadline=None)
@given(dags())
def test_serialize_round_trip(q):
    text = el.serialize_quiver(q)
    q2 = el.parse_quiver(text)
    assert q2 == q
    assert el.serialize_quiver(q2) == text


def test_paths_count(noyy):
    assert len(noyy.paths(0, 2)) == 2
    assert noyy.paths(2, 0) == []
