import math

import numpy as np
import pytest

from epsentropy import (
    apply_channel,
    centered,
    compound_covariance,
    covariance_spectrum,
    make_channel,
    make_measure,
    mutual_entropy,
    scalar_channel,
)
from epsentropy.errors import (
    DimensionMismatch,
    NonFinite,
    NonzeroMean,
    NotPositiveSemidefinite,
    NotSymmetric,
    SingularNoise,
)


def test_make_measure_scalar():
    mu = make_measure([0], [[1]])
    assert mu.dim == 1
    assert mu.mean.tolist() == [0.0]
    assert mu.cov.tolist() == [[1.0]]


def test_make_measure_diag_two():
    mu = make_measure([0, 0], [[4, 0], [0, 1]])
    # eigenvalues of diag(4, 1) are its diagonal
    assert np.allclose(np.linalg.eigvalsh(mu.cov), [1.0, 4.0])


def test_make_measure_rejects_negative_variance():
    with pytest.raises(NotPositiveSemidefinite):
        make_measure([0], [[-1]])


def test_make_measure_symmetrizes():
    mu = make_measure([0, 0], [[2, 1.5], [0.5, 2]])
    assert mu.cov[0, 1] == mu.cov[1, 0] == 1.0


def test_make_measure_errors():
    with pytest.raises(DimensionMismatch):
        make_measure([0, 0], [[1]])
    with pytest.raises(NonFinite):
        make_measure([0], [[np.nan]])
    with pytest.raises(NonFinite):
        make_measure([np.inf], [[1]])


def test_measure_is_immutable():
    mu = centered([[1.0]])
    with pytest.raises(ValueError):
        mu.cov[0, 0] = 2.0


def test_apply_channel_examples():
    assert apply_channel(centered([[1]]), scalar_channel(1, 1)).cov.tolist() == [[2.0]]
    r0 = np.array([[2.0, 0.3], [0.3, 1.0]])
    out = apply_channel(centered(np.eye(2) * 3), make_channel(np.zeros((2, 2)), r0))
    assert np.array_equal(out.cov, r0)
    out = apply_channel(centered(np.diag([4.0, 1.0])), make_channel(np.eye(2), np.eye(2)))
    assert np.array_equal(out.cov, np.diag([5.0, 2.0]))
    assert not np.any(out.mean)


def test_apply_channel_errors():
    with pytest.raises(NonzeroMean):
        apply_channel(make_measure([1], [[1]]), scalar_channel(1, 1))
    with pytest.raises(DimensionMismatch):
        apply_channel(centered(np.eye(2)), scalar_channel(1, 1))


def test_compound_covariance_examples():
    assert compound_covariance(centered([[1]]), scalar_channel(1, 1)).c.tolist() == [[1, 1], [1, 2]]
    assert compound_covariance(centered([[1]]), scalar_channel(0, 1)).c.tolist() == [[1, 0], [0, 1]]
    cc = compound_covariance(centered(np.diag([4.0, 1.0])), make_channel(np.eye(2), np.eye(2)))
    d = np.diag([4.0, 1.0])
    assert np.array_equal(cc.c, np.block([[d, d], [d, np.diag([5.0, 2.0])]]))


def test_compound_blocks_match_exactly():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(3, 3))
    mu = centered(m @ m.T)
    ch = make_channel(rng.normal(size=(3, 3)), np.eye(3) * 0.5)
    cc = compound_covariance(mu, ch)
    assert np.array_equal(cc.input_block, mu.cov)
    assert np.array_equal(cc.output_block, apply_channel(mu, ch).cov)


def test_mutual_entropy_examples():
    assert mutual_entropy(centered([[1]]), scalar_channel(1, 1)) == pytest.approx(0.5 * math.log(2), abs=1e-15)
    assert mutual_entropy(centered([[3]]), scalar_channel(0, 0.7)) == 0.0
    me = mutual_entropy(centered(np.diag([4.0, 1.0])), make_channel(np.eye(2), np.eye(2)))
    assert me == pytest.approx(0.5 * math.log(10), abs=1e-14)
    assert me == pytest.approx(1.15129, abs=1e-5)


def test_mutual_entropy_matches_slogdet_formula():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = rng.integers(1, 6)
        m = rng.normal(size=(n, n))
        r = m @ m.T
        k = rng.normal(size=(n, n))
        r0 = k @ k.T + 0.1 * np.eye(n)
        a = rng.normal(size=(n, n))
        expected = 0.5 * (np.linalg.slogdet(a @ r @ a.T + r0)[1] - np.linalg.slogdet(r0)[1])
        assert mutual_entropy(centered(r), make_channel(a, r0)) == pytest.approx(expected, abs=1e-9)


def test_mutual_entropy_singular_noise():
    with pytest.raises(SingularNoise):
        mutual_entropy(centered([[1]]), scalar_channel(1, 0))


@pytest.mark.parametrize(
    "cov, expected",
    [
        (np.diag([4.0, 1.0]), [4.0, 1.0]),
        ([[2.0, 1.0], [1.0, 2.0]], [3.0, 1.0]),  # (2-x)^2 - 1 = 0
        ([[1.0]], [1.0]),
    ],
)
def test_covariance_spectrum(cov, expected):
    assert np.allclose(covariance_spectrum(cov), expected, atol=1e-14)


def test_covariance_spectrum_clamps_and_rejects():
    eig = covariance_spectrum([[1.0, 1.0], [1.0, 1.0]])
    assert eig[-1] == 0.0 and eig[0] == pytest.approx(2.0)
    with pytest.raises(NotSymmetric):
        covariance_spectrum([[1.0, 0.5], [0.0, 1.0]])
