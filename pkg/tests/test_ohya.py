import math

import numpy as np
import pytest

from epsentropy import (
    JMode,
    TvBranch,
    centered,
    j_exact,
    j_first_order,
    max_mutual_entropy_tv,
    mutual_entropy,
    ohya_tv,
    s_k_rv,
    s_k_tv,
    s_o_rv,
    s_o_tv,
    scalar_channel,
    tv_exact,
    tv_invert,
)
from epsentropy.errors import AdmissibilityViolated, DimensionMismatch, EpsOutOfRange
from epsentropy.gaussian_core import make_channel
from epsentropy.ohya import s_o_tv_search

# sqrt(2 pi) / 4
K = 0.6266570686577501


def _channel_at(sigma2, delta, branch, noise=None):
    """A 1-D channel with TV level delta; noise defaults to the floor delta."""
    c = tv_invert(sigma2, delta, branch)
    noise = delta if noise is None else noise
    return scalar_channel(math.sqrt((c - noise) / sigma2), noise), c


def test_constant():
    assert K == pytest.approx(math.sqrt(2 * math.pi) / 4, rel=1e-15)


def test_j_first_order_examples():
    # 0.5 ln 10 = 1.1512925465, ln(1 + 0.0626657) = 0.0607803
    up = 0.5 * math.log(10) + math.log(1 + K * 0.1)
    lo = 0.5 * math.log(10) - math.log(1 + K * 0.1)
    assert up == pytest.approx(1.21207, abs=1e-5)
    assert lo == pytest.approx(1.09051, abs=1e-5)
    ch, _ = _channel_at(1.0, 0.1, TvBranch.UPPER)
    assert max_mutual_entropy_tv(1.0, ch, JMode.FIRST_ORDER) == pytest.approx(up, abs=1e-9)
    ch, _ = _channel_at(1.0, 0.1, TvBranch.LOWER)
    assert max_mutual_entropy_tv(1.0, ch, JMode.FIRST_ORDER) == pytest.approx(lo, abs=1e-9)
    assert j_first_order(1.0, 0.1, TvBranch.UPPER) == pytest.approx(up, abs=1e-15)


def test_j_exact_matches_closed_form():
    for branch in TvBranch:
        ch, c = _channel_at(2.0, 0.2, branch)
        assert max_mutual_entropy_tv(2.0, ch, JMode.EXACT) == pytest.approx(0.5 * math.log(c / 0.2), abs=1e-9)
        assert j_exact(2.0, 0.2, branch) == pytest.approx(0.5 * math.log(c / 0.2), abs=1e-12)


def test_j_diverges_at_zero_delta():
    assert max_mutual_entropy_tv(1.0, scalar_channel(0.0, 1.0)) == math.inf
    assert max_mutual_entropy_tv(1.0, scalar_channel(0.5, 0.75), JMode.EXACT) == math.inf


def test_j_admissibility():
    c = tv_invert(1.0, 0.1, TvBranch.UPPER)
    ch = scalar_channel(math.sqrt((c - 0.05) / 1.0), 0.05)
    with pytest.raises(AdmissibilityViolated) as info:
        max_mutual_entropy_tv(1.0, ch)
    assert info.value.gap == pytest.approx(0.05, abs=1e-9)
    with pytest.raises(DimensionMismatch):
        max_mutual_entropy_tv(1.0, make_channel(np.eye(2), np.eye(2)))


def test_j_dominates_admissible_channels():
    sigma2 = 1.5
    for c in np.linspace(0.5, 3.0, 11):
        delta = tv_exact(sigma2, c)
        if delta == 0.0 or delta >= c:
            continue
        for noise in np.linspace(delta, c, 7):
            beta = math.sqrt(max(c - noise, 0.0) / sigma2)
            ch = scalar_channel(beta, noise)
            assert max_mutual_entropy_tv(sigma2, ch, JMode.EXACT) >= mutual_entropy(centered([[sigma2]]), ch) - 1e-12


def test_s_o_tv_first_order():
    assert s_o_tv(1.0, 0.1) == pytest.approx(1.09051, abs=1e-5)
    expected = 0.5 * math.log(1 / 0.1) + 0.5 * math.log(1.0 / (1 + K * 0.1) ** 2)
    assert s_o_tv(1.0, 0.1, JMode.FIRST_ORDER) == pytest.approx(expected, abs=1e-15)
    assert s_o_tv(1.0, 0.1) > s_k_tv(1.0, 0.1)[0]


def test_s_o_tv_exact():
    res = ohya_tv(1.0, 0.1, JMode.EXACT)
    assert abs(tv_exact(1.0, res.branch_variance) - 0.1) <= 1e-10
    assert res.entropy_nats == pytest.approx(0.5 * math.log(res.branch_variance / 0.1), abs=1e-15)
    # modes differ at first order in eps
    assert abs(res.entropy_nats - s_o_tv(1.0, 0.1)) <= 0.5 * 0.1


def test_s_o_tv_clamps():
    res = ohya_tv(0.01, 0.5)
    assert res.clamped and res.entropy_nats == 0.0 and res.raw_nats < 0.0
    assert not ohya_tv(1.0, 0.1).clamped


def test_s_o_tv_range():
    for eps in (0.0, -0.1, 2.0, 3.0):
        with pytest.raises(EpsOutOfRange):
            s_o_tv(1.0, eps)


@pytest.mark.parametrize("mode", list(JMode))
def test_s_o_tv_search_agrees(mode):
    value, deltas, upper, lower = s_o_tv_search(1.0, 0.2, mode, points=100)
    assert value == pytest.approx(s_o_tv(1.0, 0.2, mode), abs=1e-9)
    assert np.all(lower <= upper)
    assert np.all(np.diff(lower) < 0)


def test_s_o_rv_equals_s_k_rv():
    assert s_o_rv(centered([[1]]), 0.1) == pytest.approx(2.30259, abs=1e-5)
    assert s_o_rv(centered(np.diag([4.0, 1.0])), math.sqrt(2)) == pytest.approx(0.69315, abs=1e-5)
    r = np.array([[3.0, 1.0], [1.0, 2.0]])
    assert s_o_rv(centered(r), math.sqrt(5.0)) == 0.0
    assert s_o_rv(centered(r), 0.3) == s_k_rv(centered(r), 0.3)
