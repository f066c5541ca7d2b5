import json
import time

import numpy as np
import pytest

from ruvoa import cwlattice as cw


def e8_gram():
    # Cartan matrix of E8 (Bourbaki numbering)
    C = 2 * np.eye(8, dtype=np.int64)
    for a, b in [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]:
        C[a, b] = C[b, a] = -1
    return C


def d4_gram():
    C = 2 * np.eye(4, dtype=np.int64)
    for a in (0, 2, 3):
        C[1, a] = C[a, 1] = -1
    return C


# --- generators and group


def test_generators_shape_and_norms():
    G = cw.table_generators()
    assert G.shape == (21, 28, 2)
    assert all(cw.norm(v) == 4 for v in G)


def test_first_generators():
    G = cw.table_generators()
    first = np.zeros((28, 2), np.int64)
    first[0, 0] = 4  # true coordinate 2, doubled
    assert np.array_equal(G[0], first)
    assert np.count_nonzero(np.any(G[1] != 0, axis=1)) == 16
    assert all(abs(complex(*e)) in (0, 1) for e in G[1].tolist())


def test_group_order_and_closure():
    group = cw.monomial_group()
    keys = {g.key() for g in group}
    assert len(keys) == 448
    rng = np.random.default_rng(0)
    for _ in range(60):
        g, h = rng.choice(448, 2)
        perm, units = cw.compose(group[g], group[h])
        assert tuple(perm) + tuple(units) in keys


def test_identity_and_rotation():
    v = cw.table_generators()[3]
    assert np.array_equal(cw.MonomialElement().apply(v), v)
    w = np.zeros((28, 2), np.int64)
    w[4:8] = [[1, 0], [0, 1], [2, 0], [0, -1]]
    r = cw.MonomialElement(rotation=1).apply(w)
    assert np.array_equal(r[0:4], w[4:8]) and not r[4:].any()


def test_right_multiplication_permutes_within_block():
    v = cw.table_generators()[0]
    r = cw.MonomialElement("j").apply(v)
    nz = np.nonzero(np.any(r != 0, axis=1))[0]
    assert len(nz) == 1 and 0 < nz[0] < 4
    assert cw.norm(r) == 4


def test_group_elements_are_isometries():
    G = cw.table_generators()
    rng = np.random.default_rng(1)
    for g in rng.choice(cw.monomial_group(), 40):
        for a, b in [(0, 1), (2, 5), (7, 20), (13, 13)]:
            assert cw.hermitian(g.apply(G[a]), g.apply(G[b])) == cw.hermitian(G[a], G[b])


# --- enumeration machinery on known lattices


def test_short_vectors_root_systems():
    X, _ = cw.short_vectors(e8_gram(), 2)
    assert 2 * len(X) == 240
    X, _ = cw.short_vectors(d4_gram(), 2)
    assert 2 * len(X) == 24
    X, _ = cw.short_vectors(np.eye(3, dtype=np.int64), 2)
    assert 2 * len(X) == 18


def test_short_vectors_split_is_disjoint_and_complete():
    a, _ = cw.short_vectors(e8_gram(), 4, depth=0)
    b, _ = cw.short_vectors(e8_gram(), 4, depth=3)
    assert 2 * len(a) == 240 + 2160
    key = lambda X: sorted(map(tuple, np.vstack([X, -X]).tolist()))
    assert key(a) == key(b)


def test_lll_preserves_lattice():
    B = np.array([[1, 0, 0], [7, 1, 0], [12, 5, 1]], dtype=np.int64)
    R = cw.lll_reduce(B)
    U = np.rint(np.linalg.solve(B.T.astype(float), R.T.astype(float)).T).astype(np.int64)
    assert np.array_equal(U @ B, R) and abs(round(np.linalg.det(U))) == 1
    assert np.max(np.abs(R)) <= 1


# --- the lattice


def test_lattice_invariants(lattice):
    assert lattice.rank == 28
    assert lattice.is_even()
    assert lattice.determinant() == 1
    assert lattice.self_dual_check()
    assert lattice.minimum() == 4
    assert lattice.count_up_to(2) == 0


def test_lattice_contains_generator_orbit_and_is_group_stable(lattice):
    G = cw.table_generators()
    assert all(lattice.contains(v) for v in G)
    group = cw.monomial_group()
    for g in group[::37]:
        assert all(lattice.contains(w) for w in g.apply(lattice.basis))
    half = np.zeros((28, 2), np.int64)
    half[0, 0] = 2
    assert not lattice.contains(half)


def test_hermitian_gram_is_hermitian(lattice):
    H = lattice.hermitian_gram()
    for a in range(0, 28, 5):
        for b in range(0, 28, 3):
            assert H[a][b] == (H[b][a][0], -H[b][a][1])


def test_build_time(lattice):
    assert lattice.build_seconds < 60


def test_echelon_detects_rank_deficiency():
    G = cw.table_generators()[:1]
    ech = cw._Echelon(cw.DIM)
    ech.insert([tuple(int(t) for t in e) for e in G[0]])
    with pytest.raises(cw.ConstructionError):
        ech.finish()


# --- minimal vectors (full enumeration, once per session)


def test_minimal_vector_count(minimal_vectors):
    assert len(minimal_vectors) == cw.MINIMAL_VECTOR_COUNT
    assert np.all(cw.norm(minimal_vectors) == 16)


def test_minimal_vectors_contain_generators_and_units(minimal_vectors):
    S = {v.tobytes() for v in minimal_vectors}
    assert all(v.tobytes() in S for v in cw.table_generators())
    assert all(v.tobytes() in S for v in cw._times_i(minimal_vectors))
    assert all(v.tobytes() in S for v in -minimal_vectors)


def test_minimal_vectors_group_stable(minimal_vectors):
    S = {v.tobytes() for v in minimal_vectors}
    for g in (cw.MonomialElement("j"), cw.MonomialElement("1", 1, 1), cw.MonomialElement(rotation=1),
              cw.MonomialElement("l", -1, 5, 3)):
        assert {v.tobytes() for v in g.apply(minimal_vectors)} == S


def test_minimal_vector_coordinates_real_or_imaginary(minimal_vectors):
    assert cw.entries_real_or_imaginary(minimal_vectors)


def test_theta_series_from_enumeration(lattice, minimal_vectors):
    th = cw.theta_series(lattice, 4, minimal_vectors)
    assert th == [1, 0, cw.MINIMAL_VECTOR_COUNT]


def test_vector_file_round_trip(minimal_vectors, tmp_path):
    p = tmp_path / "v.jsonl"
    cw.write_vectors(p, minimal_vectors[:50])
    assert np.array_equal(cw.read_vectors(p), minimal_vectors[:50])


def test_enumeration_resume_is_idempotent(lattice, minimal_vectors):
    from conftest import minimal_vectors as fixture
    t = time.time()
    again = cw.enumerate_minimal(lattice, checkpoint=fixture.checkpoint)
    assert np.array_equal(again, minimal_vectors)
    assert time.time() - t < 30


# --- the quartic invariant


def test_quartic_indices_and_rank():
    idx = cw.quartic_indices()
    assert len(idx) == 31465
    assert np.array_equal(cw._quartic_rank(idx), np.arange(len(idx)))


def test_delta_single_vector():
    v = np.zeros((1, 28, 2), np.int64)
    v[0, 0, 0] = 2
    d = cw.build_delta(v)
    assert d.power_sums[0] == 16
    assert np.count_nonzero(d.power_sums) == 1


def test_delta_nonzero_and_corner(delta, minimal_vectors):
    assert delta.is_nonzero()
    # every term lambda_0^4 is real and nonnegative since coordinates are real or imaginary
    z0 = minimal_vectors[:, 0, 0] + 1j * minimal_vectors[:, 0, 1]
    assert np.all(np.abs((z0 ** 4).imag) == 0) and np.all((z0 ** 4).real >= 0)
    assert delta.corner_value() == 10240  # frozen from the enumeration
    assert delta.corner_value() == np.sum(z0 ** 4)


def test_delta_invariant_under_generating_elements(delta):
    for g in (cw.MonomialElement("j"), cw.MonomialElement("k"), cw.MonomialElement("1", -1),
              cw.MonomialElement("1", 1, 1), cw.MonomialElement("1", 1, 2),
              cw.MonomialElement(rotation=1)):
        assert cw.delta_invariant_under(delta, g)


def test_delta_detects_a_non_symmetry(delta):
    g = cw.MonomialElement()
    g.perm = np.roll(g.perm, 1)
    assert not cw.delta_invariant_under(delta, g)


def test_delta_json(delta):
    d = delta.to_json()
    assert d["scale"] == 16
    terms = d["terms"]
    assert terms == sorted(terms)
    assert json.loads(json.dumps(d)) == d
