import numpy as np
import pytest

from appsched.resilience import AgentState, SlotEvents, advance_slot, init_state
from appsched.timeline import AgentProfile


def profile(R=10, T=4, D=3, offset=0):
    return AgentProfile(0, T, D, R, offset, 0.01)


class TestInitState:
    def test_starts_at_full_resilience(self):
        s = init_state(profile(R=10))
        assert s.remaining_resilience_r == 10
        assert s.violation_count_V == 0

    def test_smallest_resilience(self):
        assert init_state(profile(R=1)).remaining_resilience_r == 1

    def test_alive_flag_from_timeline(self):
        assert init_state(profile(offset=0)).has_alive_packet
        assert not init_state(profile(offset=2)).has_alive_packet


class TestAdvanceSlot:
    def test_success_resets_and_fires_e0(self):
        s = AgentState(4, 0, True)
        new, ev = advance_slot(s, True, resilience_R=10)
        assert (new.remaining_resilience_r, new.violation_count_V) == (10, 0)
        assert ev == SlotEvents(e0_fired=True, e1_fired=False)

    def test_violation_counts_and_resets(self):
        s = AgentState(1, 0, True)
        new, ev = advance_slot(s, False, resilience_R=10)
        assert (new.remaining_resilience_r, new.violation_count_V) == (10, 1)
        assert ev == SlotEvents(e0_fired=False, e1_fired=True)

    def test_plain_decrement(self):
        s = AgentState(5, 3, True)
        new, ev = advance_slot(s, False, resilience_R=10)
        assert (new.remaining_resilience_r, new.violation_count_V) == (4, 3)
        assert ev == SlotEvents(e0_fired=False, e1_fired=False)

    def test_success_beats_decrement_at_r1(self):
        new, ev = advance_slot(AgentState(1, 0, True), True, resilience_R=10)
        assert new.remaining_resilience_r == 10
        assert ev.e0_fired and not ev.e1_fired

    def test_zero_r_rejected(self):
        with pytest.raises(ValueError):
            advance_slot(AgentState(0, 0, True), False, resilience_R=10)


def replay(success_slots, R, n_slots):
    state = AgentState(R, 0, True)
    trajectory, events = [], []
    for t in range(1, n_slots + 1):
        state, ev = advance_slot(state, t in success_slots, R)
        trajectory.append(state.remaining_resilience_r)
        events.append(ev)
    return trajectory, events, state


class TestTrajectoryReplay:
    def test_reference_trajectory(self):
        # R=10, successes at t=7,10,28,29; violations then land at t=20,39
        _, events, state = replay({7, 10, 28, 29}, R=10, n_slots=47)
        e1_slots = [t for t, ev in zip(range(1, 48), events) if ev.e1_fired]
        assert e1_slots == [20, 39]
        assert state.violation_count_V == 2

    def test_gap_between_events_bounded_by_R(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            R = int(rng.integers(1, 15))
            n = 300
            succ = {int(t) for t in rng.integers(1, n + 1, size=rng.integers(0, 40))}
            _, events, _ = replay(succ, R, n)
            last = 0
            for t, ev in zip(range(1, n + 1), events):
                if ev.e0_fired or ev.e1_fired:
                    assert t - last <= R
                    last = t
                assert not (ev.e0_fired and ev.e1_fired)

    def test_v_increments_exactly_on_e1(self):
        rng = np.random.default_rng(5)
        succ = {int(t) for t in rng.integers(1, 200, size=20)}
        state = AgentState(7, 0, True)
        for t in range(1, 200):
            prev_v = state.violation_count_V
            state, ev = advance_slot(state, t in succ, 7)
            assert state.violation_count_V - prev_v == int(ev.e1_fired)

    def test_violation_count_bounded(self):
        _, _, state = replay(set(), R=10, n_slots=100)
        assert state.violation_count_V == 10  # one E1 every R slots
