import numpy as np
import pytest

from z2kcodes.model import (CapacityError, GeneratorMatrix, standardize,
                            enumerate_codewords, residue_code)
from z2kcodes.rings import DomainError, Modulus, Z4, Z8, ZVector
from z2kcodes.weights import (MinWeightResult, WeightDistribution,
                              low_weight_codewords, merge_distributions,
                              min_euclidean_weight, sample_weights,
                              weight_distribution)

from oracles import euclid, hamming_histogram, weight_histogram

# frozen length-8 free self-dual code with doubly-even row weights
TYPE_II_8 = [[1, 0, 0, 0, 5, 1, 2, 7],
             [0, 1, 0, 0, 7, 6, 3, 7],
             [0, 0, 1, 0, 1, 7, 3, 2],
             [0, 0, 0, 1, 6, 3, 5, 3]]


def _sf(modulus, rows):
    return standardize(GeneratorMatrix(modulus, np.array(rows, dtype=np.int64)))


def _random_sf(rng, modulus, rows, n):
    return _sf(modulus, rng.integers(0, modulus.two_k, size=(rows, n)))


@pytest.mark.parametrize("two_k", [2, 4, 8])
@pytest.mark.parametrize("kind", ["euclidean", "hamming"])
def test_distribution_matches_oracle(two_k, kind):
    mod = Modulus(two_k)
    rng = np.random.default_rng(500 + two_k)
    for _ in range(8):
        sf = _random_sf(rng, mod, rng.integers(1, 5), rng.integers(2, 9))
        got = weight_distribution(sf, kind)
        words = [w.coords for w in enumerate_codewords(sf)]
        if kind == "euclidean":
            want = weight_histogram(words, two_k)
        else:
            want = hamming_histogram(words)
        assert got.counts == want
        assert got.counts[0] == 1
        assert got.total() == sf.size()


def test_distribution_zero_code():
    sf = _sf(Z8, np.zeros((1, 6), dtype=np.int64))
    assert weight_distribution(sf, "euclidean").counts == {0: 1}
    assert weight_distribution(sf, "hamming").counts == {0: 1}


def test_distribution_kind_checked():
    sf = _sf(Z4, [[1, 2, 3]])
    with pytest.raises(DomainError):
        weight_distribution(sf, "lee")


def test_distribution_wide_modulus_generic_path():
    # two_k = 16 exceeds the packed-lane coordinate width: generic path
    mod = Modulus(16)
    rng = np.random.default_rng(61)
    sf = _random_sf(rng, mod, 2, 5)
    got = weight_distribution(sf, "euclidean")
    words = [w.coords for w in enumerate_codewords(sf)]
    assert got.counts == weight_histogram(words, 16)
    target = sorted(w for w in got.counts if w)[0]
    lw = low_weight_codewords(sf, target, "euclidean")
    assert len(lw) == got.counts[target]
    assert min_euclidean_weight(sf) == MinWeightResult(target, True)


@pytest.mark.parametrize("slices", [4, 7, 64])
def test_partition_independence(slices):
    rng = np.random.default_rng(77)
    sf = _random_sf(rng, Z8, 4, 10)
    full = weight_distribution(sf, "euclidean")
    parts = [weight_distribution(sf, "euclidean", partition=(i, slices))
             for i in range(slices)]
    assert merge_distributions(parts).counts == full.counts


def test_partition_rejects_bad_slice():
    sf = _sf(Z4, [[1, 2]])
    with pytest.raises(DomainError):
        weight_distribution(sf, "euclidean", partition=(4, 4))
    with pytest.raises(DomainError):
        weight_distribution(sf, "euclidean", partition=(0, 0))


def test_budget_enforced():
    rng = np.random.default_rng(3)
    sf = _random_sf(rng, Z8, 5, 10)
    assert sf.size() > 64
    with pytest.raises(CapacityError):
        weight_distribution(sf, "euclidean", budget=64)
    # partitioning lifts the full-run budget; tight slices still fail
    with pytest.raises(CapacityError):
        weight_distribution(sf, "euclidean", partition=(0, 2), budget=64)
    ok = [weight_distribution(sf, "euclidean", partition=(i, 1024), budget=64)
          for i in range(1024)]
    assert merge_distributions(ok).counts == weight_distribution(sf, "euclidean").counts


def test_merge_rejects_mixed_kinds():
    a = WeightDistribution("euclidean", {0: 1})
    b = WeightDistribution("hamming", {0: 1})
    with pytest.raises(DomainError):
        merge_distributions([a, b])
    with pytest.raises(DomainError):
        merge_distributions([])


def test_min_weight_simple():
    sf = _sf(Z8, [[2, 2]])
    assert min_euclidean_weight(sf) == MinWeightResult(8, True)
    sf8 = _sf(Z8, TYPE_II_8)
    assert min_euclidean_weight(sf8) == MinWeightResult(16, True)


def test_min_weight_matches_oracle():
    rng = np.random.default_rng(11)
    for two_k in (2, 4, 8):
        mod = Modulus(two_k)
        for _ in range(6):
            sf = _random_sf(rng, mod, rng.integers(1, 4), rng.integers(2, 8))
            if sf.size() <= 1:
                continue
            words = [w.coords for w in enumerate_codewords(sf)]
            weights = sorted(euclid(w, two_k) for w in words if any(w))
            if not weights:
                continue
            assert min_euclidean_weight(sf) == MinWeightResult(weights[0], True)


def test_min_weight_cap_semantics():
    sf = _sf(Z8, TYPE_II_8)
    # cap at the true minimum: nothing lies below it, scan completes exactly
    assert min_euclidean_weight(sf, cap=16) == MinWeightResult(16, True)
    # generous cap: early exit with some sub-cap witness weight
    value, exact = min_euclidean_weight(sf, cap=10 ** 6)
    assert not exact
    assert 16 <= value < 10 ** 6
    dist = weight_distribution(sf, "euclidean")
    assert value in dist.counts


def test_min_weight_zero_code_rejected():
    sf = _sf(Z8, np.zeros((1, 4), dtype=np.int64))
    with pytest.raises(DomainError):
        min_euclidean_weight(sf)


def test_low_weight_codewords_match_enumeration():
    rng = np.random.default_rng(23)
    for two_k in (4, 8):
        mod = Modulus(two_k)
        for _ in range(5):
            sf = _random_sf(rng, mod, rng.integers(1, 4), rng.integers(3, 8))
            dist = weight_distribution(sf, "euclidean")
            nonzero = [w for w in dist.counts if w > 0]
            if not nonzero:
                continue
            target = nonzero[0]
            got = low_weight_codewords(sf, target, "euclidean")
            want = {w for w in enumerate_codewords(sf)
                    if euclid(w.coords, two_k) == target}
            assert got == want
            assert len(got) == dist.counts[target]


def test_low_weight_target_zero():
    sf = _sf(Z8, TYPE_II_8)
    got = low_weight_codewords(sf, 0, "euclidean")
    assert got == {ZVector(Z8, (0,) * 8)}


def test_low_weight_absent_target_empty():
    sf = _sf(Z8, TYPE_II_8)
    assert low_weight_codewords(sf, 3, "euclidean") == set()
    assert low_weight_codewords(sf, 10 ** 6, "euclidean") == set()
    with pytest.raises(DomainError):
        low_weight_codewords(sf, -1, "euclidean")


def test_low_weight_partitioned_union():
    rng = np.random.default_rng(31)
    sf = _random_sf(rng, Z4, 4, 9)
    dist = weight_distribution(sf, "euclidean")
    target = max(dist.counts, key=lambda w: dist.counts[w] if w else 0)
    full = low_weight_codewords(sf, target, "euclidean")
    parts = set()
    for i in range(8):
        parts |= low_weight_codewords(sf, target, "euclidean", partition=(i, 8))
    assert parts == full


def test_low_weight_original_coordinates():
    # a matrix that standardizes with a nontrivial column permutation
    sf = _sf(Z8, [[0, 0, 2, 1], [0, 4, 0, 2]])
    assert sf.perm != (1, 2, 3, 4)
    for target in sorted(weight_distribution(sf, "euclidean").counts):
        got = low_weight_codewords(sf, target, "euclidean")
        want = {w for w in enumerate_codewords(sf)
                if euclid(w.coords, 8) == target}
        assert got == want


def test_sample_weights_reproducible():
    sf = _sf(Z8, TYPE_II_8)
    a = sample_weights(sf, 500, seed=99)
    b = sample_weights(sf, 500, seed=99)
    c = sample_weights(sf, 500, seed=100)
    assert a.counts == b.counts
    assert a.total() == 500
    assert a.counts != c.counts  # overwhelmingly likely for 500 draws


def test_sample_weights_support_is_real():
    sf = _sf(Z8, TYPE_II_8)
    exact = weight_distribution(sf, "euclidean")
    smp = sample_weights(sf, 1000, seed=5)
    assert set(smp.counts) <= set(exact.counts)
    assert min(w for w in smp.counts if w) >= 16


def test_sample_weights_zero_code_and_errors():
    sf = _sf(Z8, np.zeros((1, 5), dtype=np.int64))
    smp = sample_weights(sf, 50, seed=1)
    assert smp.counts == {0: 50}
    with pytest.raises(DomainError):
        sample_weights(sf, 0, seed=1)


@pytest.mark.parametrize("backend_name", ["numba", "numpy"])
def test_backends_agree(backend_name, monkeypatch):
    monkeypatch.setenv("Z2K_BACKEND", backend_name)
    rng = np.random.default_rng(1234)
    sf = _random_sf(rng, Z8, 5, 12)
    dist = weight_distribution(sf, "euclidean")
    words = [w.coords for w in enumerate_codewords(sf)]
    assert dist.counts == weight_histogram(words, 8)
    mn = min_euclidean_weight(sf)
    assert mn.exact
    assert mn.value == min(w for w in dist.counts if w)
    target = sorted(w for w in dist.counts if w)[0]
    got = low_weight_codewords(sf, target, "euclidean")
    assert len(got) == dist.counts[target]


def test_backend_env_validation(monkeypatch):
    monkeypatch.setenv("Z2K_BACKEND", "fortran")
    sf = _sf(Z4, [[1, 2]])
    with pytest.raises(DomainError):
        weight_distribution(sf, "euclidean")


def test_residue_distribution_pipeline():
    # mod-2 residue of a free Z8 code: Euclidean equals Hamming on {0,1}
    sf = _sf(Z8, TYPE_II_8)
    r2 = residue_code(sf, 1)
    de = weight_distribution(r2, "euclidean")
    dh = weight_distribution(r2, "hamming")
    assert de.counts == dh.counts
    assert de.total() == r2.size() == 16
