import numpy as np
import pytest

from rise.datagen import BlobConfig, generate_blobs
from rise.kmeans import kmeans
from rise.metrics import clustering_accuracy


def _cfg(**kw):
    base = dict(
        n=40, clusters=4, views=2, latent_dim=3, view_dims=(4, 5),
        cluster_spread=1.0, center_scale=8.0, noise_sigma=0.1, seed=0,
    )
    base.update(kw)
    return BlobConfig(**base)


def test_zero_noise_degenerate_repeats_cluster_points():
    cfg = _cfg(n=4, clusters=2, views=1, view_dims=(3,), cluster_spread=0.0, noise_sigma=0.0)
    dataset, labels = generate_blobs(cfg)
    view = dataset.views[0]
    assert np.array_equal(labels, [0, 0, 1, 1])
    assert np.array_equal(view[0], view[1])
    assert np.array_equal(view[2], view[3])
    assert not np.array_equal(view[0], view[2])


def test_same_seed_is_deterministic():
    a, la = generate_blobs(_cfg(seed=11))
    b, lb = generate_blobs(_cfg(seed=11))
    assert np.array_equal(la, lb)
    for va, vb in zip(a.views, b.views):
        assert np.array_equal(va, vb)


def test_different_seeds_differ():
    a, _ = generate_blobs(_cfg(seed=1))
    b, _ = generate_blobs(_cfg(seed=2))
    assert not np.array_equal(a.views[0], b.views[0])


def test_cluster_sizes_balanced():
    _, labels = generate_blobs(_cfg(n=10, clusters=3, views=1, view_dims=(3,)))
    counts = np.bincount(labels)
    assert counts.max() - counts.min() <= 1
    assert counts.sum() == 10


def test_views_start_complete():
    dataset, _ = generate_blobs(_cfg())
    for idx in dataset.index_vectors:
        assert np.array_equal(idx, np.arange(dataset.n_total))


def test_separability_calibration_single_view_kmeans():
    # high-separation blobs: plain k-means on any one view must already solve it
    cfg = BlobConfig(
        n=1000, clusters=5, views=3, latent_dim=8, view_dims=(16, 12, 10),
        cluster_spread=1.0, center_scale=8.0, noise_sigma=0.2, seed=0,
    )
    dataset, labels = generate_blobs(cfg)
    for view in dataset.views:
        acc = clustering_accuracy(kmeans(view, 5, seed=0).assignments, labels)
        assert acc >= 0.99


@pytest.mark.parametrize(
    "kw",
    [
        dict(n=2, clusters=3),
        dict(views=0, view_dims=()),
        dict(view_dims=(4,)),
        dict(latent_dim=0),
        dict(noise_sigma=-1.0),
    ],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        _cfg(**kw)
