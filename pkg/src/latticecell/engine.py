"""Boolean two-layer rule engine (fact cells + rule cells).

The engine is a synchronous cellular machine. The fact layer carries one
cell per fact with bits EF (established), IF (participates), SF (output
copy); the rule layer carries ER (triggered), IR (participates), SR (may
still fire). Two incidence matrices wire the layers: RE marks which facts
are premises of which rules, RS marks conclusions. Forward chaining
alternates the two transition steps until nothing changes:

* fact step: SF := EF; a participating rule whose premises are all
  established becomes triggered (rules keep their trigger bit; rules with
  no premises never self-trigger).
* rule step: every triggered, participating, still-fireable rule
  establishes its conclusion facts; fired rules are consumed (SR := not ER).

EF and ER only ever grow, so a fixpoint is reached within |rules| + 1
cycles. State vectors are int bitsets; RE/RS are stored column-wise as
per-rule premise and conclusion masks.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import NamedTuple

from .bits import iter_bits
from .errors import DimensionError


class FactCell(NamedTuple):
    """Snapshot view of one fact-layer cell."""

    label: str
    ef: int
    if_: int
    sf: int


class RuleCell(NamedTuple):
    """Snapshot view of one rule-layer cell."""

    label: str
    er: int
    ir: int
    sr: int


class EngineState:
    """Mutable engine state: one fact layer, one rule layer, RE/RS wiring.

    ``premises[j]`` and ``conclusions[j]`` are fact masks (column j of RE
    and RS). Freshly built rules are (ER, IR, SR) = (0, 1, 1) and all
    facts participate.
    """

    __slots__ = ("fact_labels", "rule_labels", "premises", "conclusions",
                 "ef", "fact_if", "sf", "er", "rule_ir", "sr", "cycles")

    def __init__(self, fact_labels: Sequence[str], rule_labels: Sequence[str],
                 premises: Sequence[int], conclusions: Sequence[int]):
        if len(premises) != len(rule_labels) or len(conclusions) != len(rule_labels):
            raise DimensionError("premise/conclusion lists must match rule count")
        fact_full = (1 << len(fact_labels)) - 1
        for j, (p, c) in enumerate(zip(premises, conclusions)):
            if p < 0 or p & ~fact_full or c < 0 or c & ~fact_full:
                raise DimensionError(f"rule {j} wiring exceeds fact count")
        self.fact_labels = tuple(fact_labels)
        self.rule_labels = tuple(rule_labels)
        self.premises = tuple(premises)
        self.conclusions = tuple(conclusions)
        self.ef = 0
        self.sf = 0
        self.fact_if = fact_full
        self.er = 0
        self.rule_ir = (1 << len(rule_labels)) - 1
        self.sr = (1 << len(rule_labels)) - 1
        self.cycles = 0

    @property
    def n_facts(self) -> int:
        return len(self.fact_labels)

    @property
    def n_rules(self) -> int:
        return len(self.rule_labels)

    @property
    def facts(self) -> list[FactCell]:
        return [FactCell(lab, self.ef >> i & 1, self.fact_if >> i & 1,
                         self.sf >> i & 1)
                for i, lab in enumerate(self.fact_labels)]

    @property
    def rules(self) -> list[RuleCell]:
        return [RuleCell(lab, self.er >> j & 1, self.rule_ir >> j & 1,
                         self.sr >> j & 1)
                for j, lab in enumerate(self.rule_labels)]

    def re_matrix(self) -> list[list[int]]:
        """Premise incidence, |facts| x |rules|."""
        return [[self.premises[j] >> i & 1 for j in range(self.n_rules)]
                for i in range(self.n_facts)]

    def rs_matrix(self) -> list[list[int]]:
        """Conclusion incidence, |facts| x |rules|."""
        return [[self.conclusions[j] >> i & 1 for j in range(self.n_rules)]
                for i in range(self.n_facts)]

    def copy(self) -> "EngineState":
        clone = EngineState.__new__(EngineState)
        for name in EngineState.__slots__:
            setattr(clone, name, getattr(self, name))
        return clone

    def __eq__(self, other) -> bool:
        if not isinstance(other, EngineState):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n)
                   for n in EngineState.__slots__ if n != "cycles")

    def __repr__(self) -> str:
        return (f"EngineState({self.n_facts} facts, {self.n_rules} rules, "
                f"ef={self.ef:#x}, er={self.er:#x})")


def set_facts(state: EngineState, indices: Iterable[int]) -> EngineState:
    """Activate exactly the given facts and rearm every rule.

    Listed facts get EF = IF = 1; every other EF is cleared; SF is cleared;
    rules return to the fresh (0, 1, 1) state. Calling again replaces the
    previous activation.
    """
    mask = 0
    for i in indices:
        if not 0 <= i < state.n_facts:
            raise IndexError(f"fact index {i} out of range "
                             f"(0..{state.n_facts - 1})")
        mask |= 1 << i
    state.ef = mask
    state.fact_if |= mask
    state.sf = 0
    state.er = 0
    rule_full = (1 << state.n_rules) - 1
    state.rule_ir = rule_full
    state.sr = rule_full
    state.cycles = 0
    return state


def delta_fact(state: EngineState) -> EngineState:
    """Evaluation step: copy EF to SF and trigger satisfied rules."""
    state.sf = state.ef
    established = state.ef & state.fact_if
    er = state.er
    pending = state.rule_ir & ~er
    for j in iter_bits(pending):
        premise = state.premises[j]
        if premise and premise & ~established == 0:
            er |= 1 << j
    state.er = er
    return state


def delta_rule(state: EngineState) -> EngineState:
    """Execution step: fire triggered rules, then consume them."""
    firing = state.er & state.rule_ir & state.sr
    new_facts = 0
    for j in iter_bits(firing):
        new_facts |= state.conclusions[j]
    state.ef |= new_facts & state.fact_if
    state.sr = ~state.er & ((1 << state.n_rules) - 1)
    return state


def run_inference(state: EngineState, trace: list[str] | None = None) -> EngineState:
    """Alternate the two steps until EF and ER are stable over a full cycle.

    ``state.cycles`` records how many cycles ran (the last one is the
    confirming, change-free cycle). With a trace list, a snapshot of both
    layers is appended before the run and after every cycle.
    """
    if trace is not None:
        trace.append(render_snapshot(state))
    cycles = 0
    while True:
        before = (state.ef, state.er)
        delta_fact(state)
        delta_rule(state)
        cycles += 1
        if trace is not None:
            trace.append(render_snapshot(state))
        if (state.ef, state.er) == before:
            break
    state.cycles = cycles
    return state


def render_fact_table(state: EngineState) -> str:
    """Fact layer as an aligned text table (label, EF, IF, SF)."""
    width = max([len("Facts"), *(len(lab) for lab in state.fact_labels)] or [5])
    lines = [f"{'Facts':<{width}}  EF  IF  SF"]
    for cell in state.facts:
        lines.append(f"{cell.label:<{width}}  {cell.ef:>2}  {cell.if_:>2}  {cell.sf:>2}")
    return "\n".join(lines)


def render_rule_table(state: EngineState) -> str:
    """Rule layer as an aligned text table (label, ER, IR, SR)."""
    width = max([len("Rules"), *(len(lab) for lab in state.rule_labels)] or [5])
    lines = [f"{'Rules':<{width}}  ER  IR  SR"]
    for cell in state.rules:
        lines.append(f"{cell.label:<{width}}  {cell.er:>2}  {cell.ir:>2}  {cell.sr:>2}")
    return "\n".join(lines)


def render_snapshot(state: EngineState) -> str:
    return render_fact_table(state) + "\n\n" + render_rule_table(state)
