"""Per-agent resilience state machine.

An agent survives at most ``R`` consecutive slots without a successful
transmission. A success (event E0) resets the countdown; running out
(event E1) increments the violation counter and also resets the countdown.
The countdown runs in wall-clock slots, independent of packet aliveness.
"""

from dataclasses import dataclass

from .timeline import AgentProfile, is_alive


@dataclass
class AgentState:
    remaining_resilience_r: int
    violation_count_V: int
    has_alive_packet: bool
    q_cached: int = 0


@dataclass(frozen=True)
class SlotEvents:
    e0_fired: bool
    e1_fired: bool


def init_state(profile: AgentProfile) -> AgentState:
    """Fresh state at t=0: full resilience budget, no violations yet."""
    return AgentState(
        remaining_resilience_r=profile.resilience_R,
        violation_count_V=0,
        has_alive_packet=is_alive(profile, 0),
    )


def advance_slot(
    state: AgentState, tx_success: bool, resilience_R: int
) -> tuple[AgentState, SlotEvents]:
    """One slot transition.

    Success (E0) resets r to R before it can reach zero, so E0 and E1 are
    mutually exclusive within a slot. Without success, r decrements; hitting
    zero fires E1, counts one violation and resets r in the same slot.
    """
    if state.remaining_resilience_r < 1:
        raise ValueError("remaining_resilience_r must be >= 1 at slot entry")
    if tx_success:
        new = AgentState(resilience_R, state.violation_count_V, state.has_alive_packet)
        return new, SlotEvents(e0_fired=True, e1_fired=False)
    r = state.remaining_resilience_r - 1
    if r == 0:
        new = AgentState(resilience_R, state.violation_count_V + 1, state.has_alive_packet)
        return new, SlotEvents(e0_fired=False, e1_fired=True)
    new = AgentState(r, state.violation_count_V, state.has_alive_packet)
    return new, SlotEvents(e0_fired=False, e1_fired=False)
