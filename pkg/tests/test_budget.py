import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from easim.budget import LedgerError, certify, make_ledger


def test_make_ledger_uniform_targets():
    led = make_ledger(0.9, 2, "naive")
    assert led.targets_remaining == pytest.approx([0.9**0.5] * 2)
    assert led.targets_remaining[0] == pytest.approx(0.94868, abs=1e-5)
    for strategy in ("naive", "nearest", "global"):
        assert make_ledger(1.0, 7, strategy).targets_remaining == [1.0] * 7
    assert make_ledger(0.9, 480, "global").next_target() == pytest.approx(0.99978, abs=1e-5)
    assert make_ledger(0.5, 0).complete


@pytest.mark.parametrize("f_min, strategy", [(0.0, "naive"), (1.5, "naive"), (0.9, "greedy")])
def test_make_ledger_rejects(f_min, strategy):
    with pytest.raises(ValueError):
        make_ledger(f_min, 3, strategy)


def test_next_target_rules():
    led = make_ledger(0.9, 3, "naive").record(0.99)
    assert led.next_target() == pytest.approx(0.9 ** (1 / 3))
    led = make_ledger(0.9, 3, "global").record(0.99)
    assert led.next_target() == pytest.approx((0.9 / 0.99) ** 0.5)
    assert led.next_target() == pytest.approx(0.95346, abs=1e-5)
    led = make_ledger(0.9, 3, "nearest").record(0.99)
    assert led.next_target() == pytest.approx(0.9 / (0.99 * 0.9 ** (1 / 3)))
    assert led.next_target() == pytest.approx(0.941586, abs=1e-6)
    assert led.targets_remaining[1] == pytest.approx(0.9 ** (1 / 3))


def test_next_target_on_complete_ledger():
    led = make_ledger(0.9, 1).record(0.95)
    with pytest.raises(LedgerError):
        led.next_target()
    with pytest.raises(LedgerError):
        led.record(0.99)


def test_record_products():
    led = make_ledger(1.0, 4)
    for _ in range(4):
        led.record(1.0)
    assert led.estimate == 1.0
    led = make_ledger(0.5, 2).record(0.99).record(0.98)
    assert led.estimate == pytest.approx(0.9702, abs=1e-15)
    with pytest.raises(ValueError):
        make_ledger(0.5, 2).record(0.0)
    with pytest.raises(ValueError):
        make_ledger(0.5, 2).record(1.01)


def test_certify():
    c = certify(make_ledger(0.9, 2).record(0.97))
    assert c.estimate == pytest.approx(0.97) and not c.is_lower_bound
    assert certify(make_ledger(0.9, 2, noisy=True)).is_lower_bound
    empty = certify(make_ledger(0.9, 0))
    assert empty.estimate == 1.0 and empty.guarantee_held


def test_capped_shortfall_breaks_guarantee():
    led = make_ledger(0.9, 2)
    t = led.next_target()
    led.record(t - 0.1, t, capped=True)
    assert not certify(led).guarantee_held
    led = make_ledger(0.9, 2)
    led.record(1.0, led.next_target(), capped=True)
    assert certify(led).guarantee_held


def drive(f_min, n, strategy, slack):
    """Feed each issued target plus a fraction of its gap to 1."""
    led = make_ledger(f_min, n, strategy)
    for s in slack:
        t = led.next_target()
        assert 0 < t <= 1
        sched = led.targets_remaining
        assert led.estimate * math.prod(sched) >= f_min * (1 - 1e-12)
        led.record(t + s * (1 - t))
    return led


@settings(max_examples=200, deadline=None)
@given(
    st.floats(0.05, 1.0),
    st.sampled_from(["naive", "nearest", "global"]),
    st.lists(st.floats(0.0, 1.0), min_size=1, max_size=60),
)
def test_budget_soundness(f_min, strategy, slack):
    led = drive(f_min, len(slack), strategy, slack)
    assert led.estimate >= f_min * (1 - 1e-10)
    assert led.estimate == pytest.approx(led.product(), rel=1e-12)
    assert len(led.achieved) <= led.n_planned


@settings(max_examples=100, deadline=None)
@given(st.floats(0.3, 0.999), st.lists(st.floats(0.0, 0.9), min_size=2, max_size=50))
def test_global_lands_closer_than_naive(f_min, slack):
    naive = drive(f_min, len(slack), "naive", slack).estimate
    glob = drive(f_min, len(slack), "global", slack).estimate
    assert f_min * (1 - 1e-10) <= glob <= naive * (1 + 1e-12)


def test_clamping_after_deficit():
    led = make_ledger(0.9, 3, "global")
    led.record(0.5, led.next_target(), capped=True)
    assert led.next_target() == 1.0
    led = make_ledger(0.9, 3, "nearest")
    led.record(0.5, led.next_target(), capped=True)
    assert led.next_target() == 1.0


def test_determinism():
    seq = np.random.default_rng(0).random(20)
    a = drive(0.8, 20, "nearest", seq)
    b = drive(0.8, 20, "nearest", seq)
    assert a.achieved == b.achieved and a.estimate == b.estimate
