"""Product automaton, self-reaching accepting core, and satisfying set.

The product synchronizes the deterministic quotient with a formula
automaton.  The accepting core is the largest set of accepting product
states each of which can reach another member in at least one step; a
state of the quotient satisfies the formula exactly when the core is
reachable from one of its initial pairings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional

from .abstraction import Partition, QuotientTS
from .geometry import Region
from .logic import BuchiAutomaton, _sccs

ProductState = tuple  # (quotient state, automaton state)


@dataclass(frozen=True)
class ProductAutomaton:
    states: tuple[ProductState, ...]
    initial: frozenset
    transitions: dict[ProductState, tuple[ProductState, ...]]
    accepting: frozenset


@dataclass(frozen=True)
class SatisfyingSet:
    state_ids: frozenset
    region: Optional[Region] = None

    def __contains__(self, state_id) -> bool:
        return state_id in self.state_ids


def product(quotient: QuotientTS, b: BuchiAutomaton) -> ProductAutomaton:
    """Synchronized product; edges fire on the source quotient state's
    observation letter."""
    alphabet = {"pid"} | {
        o.label for o in quotient.observations.values() if o.is_region
    }
    undeclared = set(b.atoms) - alphabet
    if undeclared:
        raise ValueError(
            f"formula atoms {sorted(undeclared)} are not quotient observations"
        )
    states = []
    transitions = {}
    for q in quotient.states:
        letter = quotient.observations[q].letter()
        q_next = quotient.transitions[q]
        for s in b.states:
            dsts = tuple(
                (q_next, e.dst) for e in b.edges.get(s, ()) if e.accepts(letter)
            )
            states.append((q, s))
            transitions[(q, s)] = dsts
    initial = frozenset((q, s0) for q in quotient.states for s0 in b.initial)
    accepting = frozenset(
        (q, s) for q in quotient.states for s in b.accepting
    )
    return ProductAutomaton(tuple(states), initial, transitions, accepting)


def _predecessors(
    transitions: dict[Hashable, tuple], universe
) -> dict[Hashable, list]:
    preds: dict[Hashable, list] = {s: [] for s in universe}
    for src, dsts in transitions.items():
        for d in dsts:
            preds[d].append(src)
    return preds


def _backward_closure(seeds, preds) -> set:
    """All states with a path of length >= 0 into seeds."""
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        s = stack.pop()
        for p in preds.get(s, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def f_star_fixpoint(p: ProductAutomaton) -> frozenset:
    """Greatest fixpoint: repeatedly drop accepting states that cannot
    reach a remaining member in one or more steps."""
    preds = _predecessors(p.transitions, p.states)
    core = set(p.accepting)
    while True:
        # states with a path of length >= 1 into the current core
        one_step = set()
        for m in core:
            one_step.update(preds.get(m, ()))
        can_reach = _backward_closure(one_step, preds)
        # seeds already count as length >= 1; extend by closure over preds
        keep = core & (one_step | can_reach)
        if keep == core:
            return frozenset(core)
        core = keep


def f_star_scc(p: ProductAutomaton) -> frozenset:
    """Equivalent characterization: accepting states that reach (in zero
    or more steps) an accepting state lying on a cycle."""
    graph = {s: list(p.transitions.get(s, ())) for s in p.states}
    preds = _predecessors(p.transitions, p.states)
    cyclic_accepting = set()
    for comp in _sccs(graph):
        if len(comp) > 1 or comp[0] in graph[comp[0]]:
            cyclic_accepting.update(s for s in comp if s in p.accepting)
    reach = _backward_closure(cyclic_accepting, preds)
    return frozenset(s for s in p.accepting if s in reach)


def f_star(p: ProductAutomaton) -> frozenset:
    return f_star_scc(p)


def satisfying_states(
    p: ProductAutomaton,
    fstar: frozenset,
    partition: Optional[Partition] = None,
) -> SatisfyingSet:
    """Quotient states with an initial pairing that reaches the core.

    Zero-length paths count: an initial pairing already in the core
    qualifies.  When a partition is supplied the union of the included
    blocks' cells is attached as the answer region.
    """
    preds = _predecessors(p.transitions, p.states)
    reach = _backward_closure(fstar, preds)
    included = frozenset(q for (q, s) in p.initial if (q, s) in reach)
    region = None
    if partition is not None:
        region = Region(
            tuple(
                b.cell
                for b in partition.ordered_blocks()
                if b.id in included
            )
        )
    return SatisfyingSet(included, region)


def export_satisfying(
    sat: SatisfyingSet, quotient: QuotientTS, partition: Partition
) -> str:
    """Same H-representation text as the quotient export, restricted to
    satisfying states, with a one-line summary up front."""
    from .abstraction import export_quotient

    lines = [f"satisfying: {len(sat.state_ids)} of {len(quotient.states)} states"]
    full = export_quotient(quotient, partition)
    keep = False
    for line in full.splitlines():
        if line.startswith("state "):
            keep = int(line.split()[1]) in sat.state_ids
        if keep:
            lines.append(line)
    return "\n".join(lines) + "\n"
