import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import networkx as nx

from automata import AutomatonError, can_reach, explore_labelled, words_from
from automata.omega import (
    BuchiAutomaton,
    Nfa,
    ResidualClass,
    State,
    validate_trace_closed,
)
from monitoring import MonitoringError, NodeCapExceeded
from traces import (
    DistributedAlphabet,
    Letter,
    PrimalityTracker,
    Trace,
    Word,
    enumerate_primes,
    join,
)

NODE_CAP = int(os.environ.get("TRACE_MONITORS_NODE_CAP", "1000000"))


@dataclass(frozen=True)
class MonNode:
    subset: frozenset[State]
    tracker: PrimalityTracker


@dataclass(frozen=True)
class FamilyNode:
    subsets: tuple[frozenset[State], ...]
    tracker: PrimalityTracker


@dataclass(frozen=True)
class MonReport:
    verdict: bool
    witness: Optional[Word] = None
    good_letters: frozenset[Letter] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.verdict != (self.witness is None):
            raise MonitoringError("A witness is reported exactly on a negative verdict")


def _explore_paths(initial, successors) -> tuple[dict, nx.DiGraph]:
    """Shortest words to every node and the successor graph."""
    try:
        graph = explore_labelled([initial], successors, NODE_CAP)
    except AutomatonError as error:
        raise NodeCapExceeded(NODE_CAP) from error
    return words_from(graph, initial), graph


def decide_word_monitorable(automaton: BuchiAutomaton) -> MonReport:
    letters = automaton.letters

    def successors(subset):
        return [(a, automaton.post(subset, a)) for a in letters]

    paths, graph = _explore_paths(frozenset({automaton.initial}), successors)
    good = {s for s in paths if automaton.residual_class(s).is_good}
    reaches_good = can_reach(graph, good)

    good_letters = frozenset(paths[s][-1] for s in good if paths[s])
    for subset, word in paths.items():
        if subset not in reaches_good:
            return MonReport(False, word, good_letters)
    return MonReport(True, None, good_letters)


def gadget_from_nfa(nfa: Nfa, separator: Letter = "b") -> BuchiAutomaton:
    """Büchi automaton over Γ ∪ {separator} that is monitorable exactly when
    the NFA accepts every word over Γ.

    An incomplete NFA gets a sink state first, so the gadget then has four
    states more than the NFA rather than three."""
    if separator in nfa.letters:
        raise MonitoringError(
            "Separator {!r} must not be a letter of the NFA".format(separator)
        )

    complete = nfa.completed()
    taken = set(complete.states)

    def fresh(name: str) -> str:
        while name in taken:
            name = "{}'".format(name)
        taken.add(name)
        return name

    d, e, f = fresh("d"), fresh("e"), fresh("f")
    gamma = complete.letters
    sigma = tuple(gamma) + (separator,)

    transitions = set(complete.transitions)
    for q in complete.states:
        transitions.add((q, separator, f if q in complete.accepting else d))
    for a in gamma:
        transitions.add((d, a, e))
        transitions.add((e, a, e))
    transitions.add((e, separator, d))
    transitions.add((d, separator, d))
    for c in sigma:
        transitions.add((f, c, f))

    return BuchiAutomaton(
        complete.states + (d, e, f),
        complete.initial,
        frozenset({e, f}),
        frozenset(transitions),
        sigma,
    )


def _mon_successors(
    automaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
    letters: Sequence[Letter],
) -> Callable[[MonNode], list[tuple[Letter, MonNode]]]:
    def successors(node: MonNode) -> list[tuple[Letter, MonNode]]:
        return [
            (
                a,
                MonNode(automaton.post(node.subset, a), node.tracker.step(alphabet, a)),
            )
            for a in letters
        ]

    return successors


def _over_alphabet(
    automaton: BuchiAutomaton, alphabet: DistributedAlphabet
) -> BuchiAutomaton:
    unknown = set(automaton.letters) - set(alphabet.letters)
    if unknown:
        raise MonitoringError(
            "Automaton letters {} are not in the alphabet".format(sorted(unknown))
        )
    return automaton.with_letters(alphabet.letters)


def decide_local_monitorable(
    automaton: BuchiAutomaton, alphabet: DistributedAlphabet, validate: bool = False
) -> MonReport:
    automaton = _over_alphabet(automaton, alphabet)
    if validate:
        validate_trace_closed(automaton, alphabet)

    initial = MonNode(frozenset({automaton.initial}), PrimalityTracker())
    paths, graph = _explore_paths(
        initial, _mon_successors(automaton, alphabet, alphabet.letters)
    )

    last_letter = {}
    for node in paths:
        prime, letter = node.tracker.status(alphabet)
        if prime:
            last_letter[node] = letter

    good = {
        node
        for node in last_letter
        if automaton.residual_class(node.subset).is_good
    }
    good_letters = frozenset(last_letter[node] for node in good)

    if not good:
        first_prime = next(iter(last_letter), None)
        return MonReport(
            False, paths[first_prime] if first_prime is not None else (), good_letters
        )

    hit_components = {alphabet.component_of(a) for a in good_letters}
    if len(hit_components) >= 2:
        return MonReport(True, None, good_letters)

    (component,) = hit_components
    reaches_good = can_reach(graph, good)
    for node, letter in last_letter.items():
        if letter in component and node not in reaches_good:
            return MonReport(False, paths[node], good_letters)
    return MonReport(True, None, good_letters)


class BruteForceOutcome(Enum):
    MONITORABLE = "true"
    NOT_MONITORABLE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BruteForceReport:
    outcome: BruteForceOutcome
    witness: Optional[Word] = None


def coherent_within(s: Trace, t: Trace, depth: int) -> bool:
    joined = join([s, t])
    return joined is not None and len(joined) <= depth


def brute_force_local_monitorable(
    automaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
    k1: int,
    k2: int,
    depth: int,
) -> BruteForceReport:
    """Search the definition directly: every prime with at most ``k1`` events
    needs a coherent prime with at most ``k2`` events whose every extension
    is in L or every extension is outside L."""
    if k1 <= 0 or k2 <= 0:
        return BruteForceReport(BruteForceOutcome.UNKNOWN)

    automaton = _over_alphabet(automaton, alphabet)
    deciding = [
        t
        for t in enumerate_primes(alphabet, k2)
        if automaton.residual_class(automaton.subset_after(t.normal_form)).is_good
    ]

    for s in enumerate_primes(alphabet, k1):
        if not any(coherent_within(s, t, depth) for t in deciding):
            if not decide_local_monitorable(automaton, alphabet).verdict:
                return BruteForceReport(
                    BruteForceOutcome.NOT_MONITORABLE, s.normal_form
                )
            return BruteForceReport(BruteForceOutcome.UNKNOWN, s.normal_form)

    return BruteForceReport(BruteForceOutcome.MONITORABLE)


# A prime u belongs to member i when the residual of automaton j after u has
# the given class.
Predicate = tuple[int, ResidualClass]


def _family_search(
    automata: Sequence[BuchiAutomaton],
    predicates: Sequence[Predicate],
    alphabet: DistributedAlphabet,
    letters: Sequence[Letter],
) -> MonReport:
    def successors(node: FamilyNode) -> list[tuple[Letter, FamilyNode]]:
        return [
            (
                a,
                FamilyNode(
                    tuple(b.post(s, a) for b, s in zip(automata, node.subsets)),
                    node.tracker.step(alphabet, a),
                ),
            )
            for a in letters
        ]

    initial = FamilyNode(
        tuple(frozenset({b.initial}) for b in automata), PrimalityTracker()
    )
    paths, graph = _explore_paths(initial, successors)

    last_letter = {}
    for node in paths:
        prime, letter = node.tracker.status(alphabet)
        if prime:
            last_letter[node] = letter

    targets = {
        node
        for node in last_letter
        if any(
            automata[j].residual_class(node.subsets[j]) is residual
            for j, residual in predicates
        )
    }
    good_letters = frozenset(last_letter[node] for node in targets)
    reaches_target = can_reach(graph, targets)

    for node in last_letter:
        if node not in reaches_target:
            return MonReport(False, paths[node], good_letters)
    return MonReport(True, None, good_letters)


def decide_family_local_monitorable(
    family: Sequence[BuchiAutomaton], alphabet: DistributedAlphabet
) -> MonReport:
    if not family:
        raise MonitoringError("Family must contain at least one language")
    if not alphabet.is_connected():
        raise MonitoringError(
            "Family monitorability needs a connected alphabet, reduce first"
        )
    family = [_over_alphabet(automaton, alphabet) for automaton in family]

    return _family_search(
        family,
        [(i, ResidualClass.UNIVERSAL) for i in range(len(family))],
        alphabet,
        alphabet.letters,
    )


class ReductionCase(Enum):
    TRIVIAL_MONITORABLE = "trivial"
    NOT_MONITORABLE = "not-monitorable"
    REDUCED = "reduced"


@dataclass(frozen=True)
class ReductionReport:
    case: ReductionCase
    components: tuple[frozenset[Letter], ...]
    primary: Optional[frozenset[Letter]] = None
    family_report: Optional[MonReport] = None
    witnesses: tuple[Word, ...] = ()

    @property
    def verdict(self) -> bool:
        if self.case is ReductionCase.REDUCED:
            return self.family_report.verdict
        return self.case is ReductionCase.TRIVIAL_MONITORABLE

    @property
    def claim(self) -> str:
        if self.case is not ReductionCase.REDUCED:
            return ""
        return (
            "L is locally monitorable iff the family {{L1, L2}} of primes over "
            "{{{}}} with all extensions in L, resp. outside L, is".format(
                ",".join(sorted(self.primary))
            )
        )


def _deciding_primes(
    automaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
    letters: Sequence[Letter],
    residual: ResidualClass,
) -> Optional[Word]:
    initial = MonNode(frozenset({automaton.initial}), PrimalityTracker())
    paths, _ = _explore_paths(initial, _mon_successors(automaton, alphabet, letters))
    for node, word in paths.items():
        if node.tracker.status(alphabet)[0]:
            if automaton.residual_class(node.subset) is residual:
                return word
    return None


def reduce_disconnected(
    automaton: BuchiAutomaton, alphabet: DistributedAlphabet
) -> ReductionReport:
    automaton = _over_alphabet(automaton, alphabet)
    components = tuple(alphabet.components())
    if len(components) != 2:
        raise MonitoringError(
            "Reduction needs exactly two components, found {}".format(len(components))
        )

    universal = [
        _deciding_primes(automaton, alphabet, sorted(c), ResidualClass.UNIVERSAL)
        for c in components
    ]
    empty = [
        _deciding_primes(automaton, alphabet, sorted(c), ResidualClass.EMPTY)
        for c in components
    ]

    for found in (universal, empty):
        if all(w is not None for w in found):
            return ReductionReport(
                ReductionCase.TRIVIAL_MONITORABLE, components, witnesses=tuple(found)
            )

    deciding = [
        i
        for i in range(2)
        if universal[i] is not None or empty[i] is not None
    ]
    if not deciding:
        return ReductionReport(ReductionCase.NOT_MONITORABLE, components)
    if len(deciding) == 2:
        # Primes in both components forcing opposite verdicts are coherent.
        raise MonitoringError("Language is not trace-closed")

    primary = components[deciding[0]]
    family_report = _family_search(
        [automaton],
        [(0, ResidualClass.UNIVERSAL), (0, ResidualClass.EMPTY)],
        alphabet,
        sorted(primary),
    )
    witness = universal[deciding[0]] or empty[deciding[0]]
    return ReductionReport(
        ReductionCase.REDUCED,
        components,
        primary=primary,
        family_report=family_report,
        witnesses=(witness,),
    )
