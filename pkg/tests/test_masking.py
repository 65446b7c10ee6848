import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rise.datagen import BlobConfig, generate_blobs
from rise.masking import (
    Mask,
    MaskError,
    apply_mask,
    gather,
    generate_mask,
    mask_from_index_vectors,
    mask_to_index_vectors,
    read_mask,
    scatter,
    write_mask,
)


def test_zero_missing_rate_gives_all_true():
    mask = generate_mask(10, 2, 0.0, seed=1)
    assert mask.table.all()


def test_two_view_half_missing_structure():
    mask = generate_mask(10, 2, 0.5, seed=3)
    complete = mask.table.all(axis=1)
    assert complete.sum() == 5
    # for v=2 the only proper non-empty subsets keep exactly one view
    assert (mask.table[~complete].sum(axis=1) == 1).all()


def test_mask_determinism():
    a = generate_mask(30, 3, 0.4, seed=9)
    b = generate_mask(30, 3, 0.4, seed=9)
    assert np.array_equal(a.table, b.table)
    c = generate_mask(30, 3, 0.4, seed=10)
    assert not np.array_equal(a.table, c.table)


def test_single_view_with_missing_rate_is_infeasible():
    with pytest.raises(MaskError):
        generate_mask(10, 1, 0.2, seed=0)


def test_mask_invariants_across_100_seeds():
    for seed in range(100):
        mask = generate_mask(23, 3, 0.6, seed=seed)
        assert mask.table.any(axis=1).all()
        assert mask.table.any(axis=0).all()
        assert mask.table.all(axis=1).sum() == round(0.4 * 23)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 40),
    n_views=st.integers(2, 6),
    missing_rate=st.floats(0.0, 0.9),
    seed=st.integers(0, 10_000),
)
def test_mask_invariants_property(n, n_views, missing_rate, seed):
    n_complete = round((1 - missing_rate) * n)
    if n_complete == 0 and n - n_complete < 2:
        # a lone incomplete row can never cover every view
        with pytest.raises(MaskError):
            generate_mask(n, n_views, missing_rate, seed)
        return
    mask = generate_mask(n, n_views, missing_rate, seed)
    assert mask.table.shape == (n, n_views)
    assert mask.table.any(axis=1).all()
    assert mask.table.any(axis=0).all()
    assert mask.table.all(axis=1).sum() == n_complete


def test_index_vectors_direct_readoff():
    mask = Mask(np.array([[True, True], [False, True], [True, False]]))
    h = mask_to_index_vectors(mask)
    assert np.array_equal(h[0], [0, 2])
    assert np.array_equal(h[1], [0, 1])


def test_index_vectors_complete_case():
    mask = generate_mask(6, 3, 0.0, seed=0)
    for h in mask_to_index_vectors(mask):
        assert np.array_equal(h, np.arange(6))


def test_mask_index_vector_roundtrip():
    for seed in range(20):
        mask = generate_mask(17, 4, 0.5, seed=seed)
        rebuilt = mask_from_index_vectors(mask_to_index_vectors(mask), 17)
        assert np.array_equal(rebuilt.table, mask.table)


def test_mask_constructor_rejects_empty_row():
    with pytest.raises(MaskError):
        Mask(np.array([[True, True], [False, False]]))


def test_mask_constructor_rejects_empty_column():
    with pytest.raises(MaskError):
        Mask(np.array([[True, False], [True, False]]))


def test_gather_direct_selection():
    y = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    assert np.array_equal(gather(y, np.array([0, 2])), [[1.0, 2.0], [5.0, 6.0]])


def test_gather_identity_on_full_range():
    y = np.arange(12.0).reshape(4, 3)
    assert np.array_equal(gather(y, np.arange(4)), y)


def test_scatter_single_placement():
    out = scatter(np.array([[1.0, 2.0]]), np.array([1]), 3)
    assert np.array_equal(out, [[0, 0], [1, 2], [0, 0]])


def test_scatter_identity_on_full_range():
    f = np.arange(6.0).reshape(3, 2)
    assert np.array_equal(scatter(f, np.arange(3), 3), f)


def test_scatter_preserves_frobenius_norm():
    rng = np.random.default_rng(0)
    f = rng.standard_normal((4, 3))
    out = scatter(f, np.array([1, 3, 5, 6]), 9)
    assert np.isclose(np.linalg.norm(out), np.linalg.norm(f))


def test_gather_scatter_inverse_composition():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(2, 30))
        n_i = int(rng.integers(1, n + 1))
        h = np.sort(rng.choice(n, size=n_i, replace=False))
        f = rng.standard_normal((n_i, 3))
        assert np.array_equal(gather(scatter(f, h, n), h), f)


def test_scatter_then_gather_zeroes_outside_rows():
    f = np.ones((2, 2))
    h = np.array([0, 2])
    placed = scatter(f, h, 4)
    assert np.array_equal(placed[[1, 3]], np.zeros((2, 2)))


def test_gather_bounds_checked():
    with pytest.raises(IndexError):
        gather(np.zeros((2, 2)), np.array([2]))


def test_scatter_bounds_checked():
    with pytest.raises(IndexError):
        scatter(np.zeros((1, 2)), np.array([3]), 3)
    with pytest.raises(ValueError):
        scatter(np.zeros((2, 2)), np.array([1, 1]), 3)


def test_apply_mask_drops_rows():
    dataset, _ = generate_blobs(
        BlobConfig(n=8, clusters=2, views=2, latent_dim=2, view_dims=(3, 3), seed=0)
    )
    mask = generate_mask(8, 2, 0.5, seed=1)
    masked = apply_mask(dataset, mask)
    h = mask_to_index_vectors(mask)
    for i in range(2):
        assert np.array_equal(masked.index_vectors[i], h[i])
        assert np.array_equal(masked.views[i], dataset.views[i][h[i]])


def test_apply_mask_requires_complete_dataset():
    dataset, _ = generate_blobs(
        BlobConfig(n=8, clusters=2, views=2, latent_dim=2, view_dims=(3, 3), seed=0)
    )
    mask = generate_mask(8, 2, 0.5, seed=1)
    masked = apply_mask(dataset, mask)
    with pytest.raises(ValueError):
        apply_mask(masked, mask)


def test_mask_file_roundtrip(tmp_path):
    mask = generate_mask(12, 3, 0.5, seed=4)
    path = tmp_path / "mask.csv"
    write_mask(mask, path)
    assert np.array_equal(read_mask(path).table, mask.table)


def test_read_mask_rejects_bad_values(tmp_path):
    path = tmp_path / "mask.csv"
    path.write_text("1,2\n1,0\n")
    with pytest.raises(MaskError):
        read_mask(path)
