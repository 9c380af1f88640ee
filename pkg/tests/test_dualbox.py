import numpy as np
import pytest

from statset.dualbox import (
    DeltaTuple,
    assemble_matrix,
    build_delta_tuple,
    dual_bound,
    node_minor_vector,
    order_nodes,
)
from statset.omega import volume_power


def test_minor_vector_two_nodes():
    v = node_minor_vector(np.array([0.0, 1.0]))
    assert np.all(np.abs(v) == 1.0)


def test_order_nodes_rejects_duplicates():
    with pytest.raises(ValueError):
        order_nodes([0.1, 0.1, 0.3])


def test_order_nodes_equispaced_last_entry_large():
    t = np.array([0.0, 0.5, 1.0])
    perm = order_nodes(t)
    ordered = t[perm]
    for l in (2, 1):
        v = node_minor_vector(ordered[: l + 1])
        assert abs(v[-1]) >= 0.1 * np.abs(v).max()


def test_order_nodes_is_permutation(rng):
    t = rng.uniform(0, 1, 4)
    perm = order_nodes(t)
    assert sorted(perm.tolist()) == [0, 1, 2, 3]


def test_delta_tuple_validation():
    with pytest.raises(ValueError):  # nodes too wide
        DeltaTuple(k=2, K=8, delta=1 / 64, t=np.array([0.0, 0.3, 0.6]), s=np.zeros(3))
    with pytest.raises(ValueError):  # not separated
        DeltaTuple(k=2, K=8, delta=1 / 64, t=np.array([0.0, 0.01, 0.12]), s=np.zeros(3))
    with pytest.raises(ValueError):  # outside the square
        DeltaTuple(k=2, K=8, delta=1 / 64, t=np.array([0.0, 1 / 16, 1 / 8]), s=np.array([0.0, 0.5, 1.5]))


def test_builder_produces_valid_tuples(rng):
    for k in (2, 3):
        tup = build_delta_tuple(k, 8, 2 ** -6, rng)
        assert tup.t.shape == (k + 1,)
        assert all(0 <= c < 64 and 0 <= r < 64 for c, r in tup.squares)


def test_matrix_block_structure(rng):
    tup = build_delta_tuple(3, 8, 2 ** -6, rng)
    mat, sizes = assemble_matrix(tup)
    assert sizes == [3, 4, 2]
    pos = 0
    for size in sizes:
        assert np.all(mat[pos + size :, pos : pos + size] == 0.0)
        pos += size


def test_block_det_equals_bordered_vandermonde(rng):
    # the second diagonal block has rows (1, t_j, ..., t_j^{k-1}, s_j): its
    # determinant is the minor vector paired with the s samples
    tup = build_delta_tuple(2, 8, 2 ** -6, rng)
    mat, sizes = assemble_matrix(tup)
    blk = mat[sizes[0] :, sizes[0] :]
    expected = node_minor_vector(tup.t) @ tup.s
    assert np.linalg.det(blk) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_equal_s_degenerates():
    t0 = 0.1
    tup = DeltaTuple(
        k=2, K=8, delta=1 / 64,
        t=np.array([t0, t0 + 1 / 16, t0 + 2 / 16]),
        s=np.array([0.4, 0.4, 0.4]),
    )
    res = dual_bound(tup)
    assert res.degenerate
    assert res.det_direct == pytest.approx(0.0, abs=1e-12)
    assert res.bound == pytest.approx(0.0, abs=1e-12)
    # by-hand value: s * sum of minor-vector entries, which vanishes
    v = node_minor_vector(tup.t)
    assert 0.4 * v.sum() == pytest.approx(0.0, abs=1e-15)


def test_factorization_random_tuples(rng):
    for k in (2, 3):
        seen = 0
        while seen < 30:
            tup = build_delta_tuple(k, 8, 2 ** -6, rng)
            res = dual_bound(tup)
            if res.degenerate:
                continue
            seen += 1
            rel = abs(abs(res.det_direct) - abs(res.det_blocks)) / abs(res.det_direct)
            assert rel <= 1e-9


def test_bound_scaling_power(rng):
    tup = build_delta_tuple(2, 8, 2 ** -6, rng)
    res = dual_bound(tup)
    power = volume_power(2) - 2 + 1
    assert res.bound == pytest.approx((2 ** -6) ** power * abs(res.det_direct), rel=1e-12)
