import random

import pytest

from shimcurve.graphs import GraphWithLengths, GroupActionOnGraph, quotient_graph


def path_graph(n, lengths=None):
    """Path on n vertices (n-1 edges)."""
    lengths = lengths or [1] * (n - 1)
    origin, inv, length = [], [], []
    for k in range(n - 1):
        e = len(origin)
        origin += [k, k + 1]
        inv += [e + 1, e]
        length += [lengths[k]] * 2
    return GraphWithLengths(n, tuple(origin), tuple(inv), tuple(length))


def cycle_graph(n, lengths=None):
    lengths = lengths or [1] * n
    origin, inv, length = [], [], []
    for k in range(n):
        e = len(origin)
        origin += [k, (k + 1) % n]
        inv += [e + 1, e]
        length += [lengths[k]] * 2
    return GraphWithLengths(n, tuple(origin), tuple(inv), tuple(length))


def with_half_edge(g, v, ell=1):
    origin = g.origin + (v,)
    inv = g.inv + (len(g.origin),)
    length = g.length + (ell,)
    return GraphWithLengths(g.n_vertices, origin, inv, length)


def loop_graph(lengths):
    origin, inv, length = [], [], []
    for ell in lengths:
        e = len(origin)
        origin += [0, 0]
        inv += [e + 1, e]
        length += [ell, ell]
    return GraphWithLengths(1, tuple(origin), tuple(inv), tuple(length))


def random_graph(rng, n_max=8, e_max=10):
    n = rng.randrange(1, n_max)
    origin, inv, length = [], [], []
    for _ in range(rng.randrange(e_max)):
        a, b = rng.randrange(n), rng.randrange(n)
        ell = rng.randrange(1, 4)
        if rng.random() < 0.15 and a == b:
            e = len(origin)
            origin.append(a)
            inv.append(e)
            length.append(1)
        else:
            e = len(origin)
            origin += [a, b]
            inv += [e + 1, e]
            length += [ell, ell]
    return GraphWithLengths(n, tuple(origin), tuple(inv), tuple(length))


def test_star():
    g = with_half_edge(path_graph(2), 0)
    s = g.star()
    assert s.n_oriented() == 2 and s.total_length() == 1
    assert path_graph(3).star().canonical_key() == path_graph(3).canonical_key()
    # a bare half-edge leaves a bare vertex
    lone = GraphWithLengths(1, (0,), (0,), (1,))
    assert lone.star().n_oriented() == 0 and lone.star().n_vertices == 1


def test_minimize_figure():
    # 3 vertices, pendant edge, double edge, two half-edges -> double edge
    origin = [0, 1, 1, 2, 1, 2, 2, 2]
    inv = [1, 0, 3, 2, 5, 4, 6, 7]
    length = [1] * 8
    g = GraphWithLengths(3, tuple(origin), tuple(inv), tuple(length))
    m = g.minimize()
    assert m.n_vertices == 2
    assert len(m.unoriented_edges()) == 2
    assert all(not m.is_half_edge(y) for y in range(m.n_oriented()))
    assert m.canonical_key() == m.minimize().canonical_key()  # idempotent


def test_minimize_cycle_and_tree():
    c = cycle_graph(5)
    assert c.minimize().canonical_key() == c.canonical_key()
    t = path_graph(6)
    m = t.minimize()
    assert m.n_oriented() == 0 and m.n_vertices == 1
    # lone loop survives (degree 2)
    g = loop_graph([1])
    assert g.minimize().canonical_key() == g.canonical_key()


def test_resolve():
    g = path_graph(2, [3])
    r = g.resolve()
    assert r.n_vertices == 4 and len(r.unoriented_edges()) == 3
    assert cycle_graph(4).resolve().canonical_key() == cycle_graph(4).canonical_key()
    # loop of length 2 becomes a 2-cycle
    r = loop_graph([2]).resolve()
    assert r.n_vertices == 2 and len(r.unoriented_edges()) == 2
    assert r.betti() == 1


def test_dual_graph():
    assert path_graph(2).dual_graph().n_vertices == 1
    d = path_graph(3).dual_graph()
    assert d.n_vertices == 2 and len(d.unoriented_edges()) == 1
    tri = cycle_graph(3)
    assert tri.dual_graph().canonical_key() == tri.canonical_key()


def test_betti():
    assert path_graph(5).betti() == 0
    assert cycle_graph(7).betti() == 1
    assert loop_graph([1, 1]).betti() == 2
    with pytest.raises(ValueError):
        GraphWithLengths(2, (), (), ()).betti()


def test_quotient_trivial_and_swap():
    g = cycle_graph(4)
    ident = (tuple(range(4)), tuple(range(g.n_oriented())))
    q = quotient_graph(GroupActionOnGraph(g, [ident]))
    assert q.canonical_key() == g.canonical_key()

    # single edge swapped with its inverse: one half-edge at the merged vertex
    g2 = path_graph(2)
    swap = ((1, 0), (1, 0))
    q2 = quotient_graph(GroupActionOnGraph(g2, [((0, 1), (0, 1)), swap]))
    assert q2.n_vertices == 1 and q2.n_oriented() == 1
    assert q2.is_half_edge(0) and q2.length[0] == 1


def test_quotient_rotation_lengths():
    # rotating a 4-cycle by 2 halves it; edge stabilizers are trivial
    g = cycle_graph(4)
    rot_v = (2, 3, 0, 1)
    rot_e = tuple((y + 4) % 8 for y in range(8))
    q = quotient_graph(GroupActionOnGraph(g, [
        (tuple(range(4)), tuple(range(8))), (rot_v, rot_e)]))
    assert q.n_vertices == 2 and len(q.unoriented_edges()) == 2
    assert set(q.length) == {1}

    # reflecting a single loop maps it to its inverse: length doubles? no:
    # the oriented pair collapses to a half-edge with stabilizer 1
    g = loop_graph([1])
    act = GroupActionOnGraph(g, [((0,), (0, 1)), ((0,), (1, 0))])
    q = quotient_graph(act)
    assert q.n_oriented() == 1 and q.is_half_edge(0) and q.length[0] == 1

    # an edge fixed by the involution doubles its length
    g = path_graph(2)
    act = GroupActionOnGraph(g, [((0, 1), (0, 1))] * 1 + [((0, 1), (0, 1))])
    q = quotient_graph(GroupActionOnGraph(g, [((0, 1), (0, 1)), ((0, 1), (0, 1))]))
    assert q.length == (2, 2)


def test_quotient_tower_consistency():
    # quotient by a 4-group equals two successive quotients by involutions
    g = cycle_graph(4)
    ident = (tuple(range(4)), tuple(range(8)))
    rot2_v = (2, 3, 0, 1)
    rot2_e = tuple((y + 4) % 8 for y in range(8))
    refl_v = (1, 0, 3, 2)  # reflection through midpoints of edges 0 and 2
    refl_e = (1, 0, 7, 6, 5, 4, 3, 2)
    comp_v = tuple(rot2_v[refl_v[i]] for i in range(4))
    comp_e = tuple(rot2_e[refl_e[i]] for i in range(8))
    full = [ident, (rot2_v, rot2_e), (refl_v, refl_e), (comp_v, comp_e)]
    q_full = quotient_graph(GroupActionOnGraph(g, full))
    assert q_full.n_vertices == 1
    assert all(q_full.is_half_edge(y) for y in range(q_full.n_oriented()))

    q1 = quotient_graph(GroupActionOnGraph(g, [ident, (rot2_v, rot2_e)]))
    # induced reflection on q1 (vertex orbits {0,2}, {1,3}; edges pair 0-1, 2-3)
    q2 = quotient_graph(GroupActionOnGraph(
        q1, [((0, 1), (0, 1, 2, 3)), ((1, 0), (1, 0, 3, 2))]))
    assert q2.canonical_key() == q_full.canonical_key()


def test_betti_preserved_by_resolve_random():
    rng = random.Random(11)
    checked = 0
    for _ in range(1000):
        g = random_graph(rng)
        try:
            b = g.betti()
        except ValueError:
            continue
        checked += 1
        assert g.resolve().betti() == b
        m = g.minimize()
        assert m.canonical_key() == m.minimize().canonical_key()
    assert checked > 200


def test_star_never_increases_betti():
    rng = random.Random(12)
    for _ in range(400):
        g = random_graph(rng)
        try:
            b = g.betti()
        except ValueError:
            continue
        s = g.star()
        try:
            bs = s.betti()
        except ValueError:
            continue
        assert bs <= b


def test_canonical_key_invariance():
    rng = random.Random(13)
    for _ in range(200):
        g = random_graph(rng, n_max=6, e_max=7)
        # relabel vertices randomly and rebuild
        perm = list(range(g.n_vertices))
        rng.shuffle(perm)
        origin = tuple(perm[v] for v in g.origin)
        g2 = GraphWithLengths(g.n_vertices, origin, g.inv, g.length)
        assert g.canonical_key() == g2.canonical_key()
