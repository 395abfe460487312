import itertools

import numpy as np
import pytest

from pgcnn.errors import BudgetExceeded, GroupParseError
from pgcnn.groups import (
    cyclic,
    diagonal_embed,
    diagonal_indices,
    dihedral,
    direct_product,
    parse_group,
    power_group,
    symmetric,
)

CONSTRUCTED = (
    [cyclic(n) for n in range(1, 9)]
    + [symmetric(k) for k in range(1, 5)]
    + [dihedral(k) for k in range(2, 7)]
    + [direct_product(cyclic(2), cyclic(3)), direct_product(symmetric(3), cyclic(2)), power_group(cyclic(2), 3)]
)


def check_group_axioms(G):
    T = G.cayley
    n = G.order
    ids = np.arange(n)
    for row in T:
        assert sorted(row) == list(range(n))
    for col in T.T:
        assert sorted(col) == list(range(n))
    assert (T[0] == ids).all() and (T[:, 0] == ids).all()
    inv = G.inverse
    assert (T[ids, inv] == 0).all() and (T[inv, ids] == 0).all()
    assert (T[T[:, :, None], ids[None, None, :]] == T[ids[:, None, None], T[None, :, :]]).all()


@pytest.mark.parametrize("G", CONSTRUCTED, ids=lambda G: G.label)
def test_group_axioms(G):
    check_group_axioms(G)


def test_cyclic_examples():
    C3 = cyclic(3)
    assert C3.mul(1, 2) == 0
    assert C3.inv(1) == 2
    assert (cyclic(1).cayley == 0).all()
    assert cyclic(4).inv(3) == 1
    with pytest.raises(ValueError):
        cyclic(0)


@pytest.mark.parametrize("n", range(1, 13))
def test_cyclic_is_abelian(n):
    assert cyclic(n).is_abelian()


def test_direct_product_examples():
    G = direct_product(cyclic(2), cyclic(3))
    assert G.order == 6
    assert G.from_tuple((1, 2)) == 5
    assert G.mul(G.from_tuple((1, 1)), G.from_tuple((1, 2))) == G.from_tuple((0, 0))
    V = direct_product(cyclic(2), cyclic(2))
    assert all(V.inv(i) == i for i in range(4))
    assert direct_product(symmetric(3), dihedral(4)).order == 48


def test_symmetric_examples():
    S3 = symmetric(3)
    assert S3.order == 6 and not S3.is_abelian()
    assert symmetric(1).order == 1
    assert symmetric(6).order == 720
    with pytest.raises(BudgetExceeded):
        symmetric(7)


def test_symmetric_lex_order_and_composition():
    perms = list(itertools.permutations(range(4)))
    S4 = symmetric(4)
    for a, b in [(3, 17), (5, 22), (11, 11), (23, 1)]:
        sa, sb = perms[a], perms[b]
        composed = tuple(sa[sb[x]] for x in range(4))
        assert perms[S4.mul(a, b)] == composed


def relabels(G, H, f):
    """True iff the bijection ``f`` (list) carries G's table onto H's."""
    assert sorted(f) == list(range(G.order))
    return all(H.mul(f[i], f[j]) == f[G.mul(i, j)] for i in range(G.order) for j in range(G.order))


def test_symmetric_2_is_cyclic_2():
    assert relabels(symmetric(2), cyclic(2), [0, 1])


def test_dihedral_3_is_symmetric_3():
    # s^f r^i acts on the triangle's vertices by x -> (-1)^f (x + i)... as s^f o r^i
    perms = list(itertools.permutations(range(3)))
    f = []
    for idx in range(6):
        refl, rot = divmod(idx, 3)
        image = tuple(((-1) ** refl * ((x + rot) % 3)) % 3 for x in range(3))
        f.append(perms.index(image))
    assert relabels(dihedral(3), symmetric(3), f)


def test_dihedral_2_is_klein_four():
    V = direct_product(cyclic(2), cyclic(2))
    assert relabels(dihedral(2), V, [V.from_tuple(divmod(i, 2)) for i in range(4)])


def test_dihedral_4_center():
    D4 = dihedral(4)
    center = [z for z in range(8) if all(D4.mul(z, g) == D4.mul(g, z) for g in range(8))]
    assert len(center) == 2
    with pytest.raises(ValueError):
        dihedral(1)


def test_power_group_examples():
    G = power_group(cyclic(2), 2)
    assert G.order == 4 and G.from_tuple((1, 1)) == 3
    assert power_group(cyclic(3), 4).order == 81
    H = power_group(symmetric(3), 2)
    a, b = H.from_tuple((1, 4)), H.from_tuple((5, 2))
    S3 = symmetric(3)
    assert H.to_tuple(H.mul(a, b)) == (S3.mul(1, 5), S3.mul(4, 2))
    assert power_group(cyclic(5), 1) == cyclic(5)


def test_power_group_is_the_flattened_product():
    assert power_group(cyclic(2), 2) == parse_group("C2xC2")
    assert power_group(cyclic(2), 2).label == "C2^2"


@pytest.mark.parametrize("G,m", [(cyclic(3), 5), (symmetric(3), 4), (cyclic(2), 16), (cyclic(6), 7)])
def test_power_group_round_trip(G, m):
    P = power_group(G, m)
    if P.order <= 4096:
        idx = range(P.order)
    else:
        idx = np.random.default_rng(0).integers(0, P.order, size=1000).tolist()
    for i in idx:
        t = P.to_tuple(i)
        assert len(t) == m and P.from_tuple(t) == i


def test_large_power_group_arithmetic_without_tables():
    P = power_group(cyclic(2), 16)
    with pytest.raises(BudgetExceeded):
        P.cayley
    rng = np.random.default_rng(1)
    a, b = (int(x) for x in rng.integers(0, P.order, size=2))
    assert P.to_tuple(P.mul(a, b)) == tuple((x + y) % 2 for x, y in zip(P.to_tuple(a), P.to_tuple(b)))
    assert P.mul(a, P.inv(a)) == 0


def test_power_group_budget():
    with pytest.raises(BudgetExceeded):
        power_group(cyclic(2), 21)
    assert power_group(cyclic(2), 21, budget=2**21).order == 2**21


def test_diagonal_embed_examples():
    assert diagonal_embed(cyclic(2), 3, 1) == 7
    for G in (cyclic(4), symmetric(3)):
        assert diagonal_embed(G, 3, 0) == 0
    with pytest.raises(ValueError):
        diagonal_embed(cyclic(2), 2, 5)


def test_diagonal_is_a_subgroup():
    G = cyclic(3)
    P = power_group(G, 2)
    diag = set(diagonal_indices(G, 2).tolist())
    assert all(P.mul(a, b) in diag for a in diag for b in diag)
    assert all(P.inv(a) in diag for a in diag)
    S = symmetric(3)
    Q = power_group(S, 3)
    for g, h in [(1, 2), (3, 5), (4, 4)]:
        assert Q.mul(diagonal_embed(S, 3, g), diagonal_embed(S, 3, h)) == diagonal_embed(S, 3, S.mul(g, h))


def test_parse_group_examples():
    G = parse_group("C2xC3")
    assert G.order == 6 and G == direct_product(cyclic(2), cyclic(3))
    assert parse_group("S3") == symmetric(3)
    assert parse_group("C1").order == 1
    assert parse_group(" D4 ") == dihedral(4)
    assert parse_group("C2xC3").spec == "C2xC3"


@pytest.mark.parametrize("spec,pos", [("Q8", 0), ("C2xQ8", 3), ("C2*C3", 2), ("", 0), ("C2x", 3), ("C0", 0)])
def test_parse_group_errors_have_positions(spec, pos):
    with pytest.raises(GroupParseError) as exc:
        parse_group(spec)
    assert exc.value.position == pos


def test_parse_group_budget():
    with pytest.raises(BudgetExceeded):
        parse_group("S6xS6xS6")
    with pytest.raises(BudgetExceeded):
        parse_group("C64", budget=32)


def test_group_elements_multiply():
    S3 = symmetric(3)
    a, b = S3.element(1), S3.element(4)
    assert int(a * b) == S3.mul(1, 4)
    assert int(a * a.inverse()) == 0
    with pytest.raises(ValueError):
        S3.element(6)
