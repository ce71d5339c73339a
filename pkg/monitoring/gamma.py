import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import click

from automata import NotDeterministic, explore_labelled, words_from
from automata.asynchronous import (
    AcceptanceCondition,
    AcceptanceKind,
    AsyncAutomaton,
    GlobalState,
    LocalState,
    accepts_lasso_async,
)
from monitoring import BoundExceeded, ConversionRefused, MonitoringError
from traces import (
    DistributedAlphabet,
    Letter,
    NotPrime,
    PrimalityTracker,
    Process,
    Trace,
    Word,
    letter_components,
    trace_of_word,
)


def _check_gamma(alphabet: DistributedAlphabet, gamma: Iterable[Process]) -> frozenset:
    gamma = frozenset(gamma)
    if not gamma:
        raise MonitoringError("Gamma must be a non-empty set of processes")
    if not gamma <= alphabet.processes:
        raise MonitoringError(
            "Gamma uses unknown processes {}".format(sorted(gamma - alphabet.processes))
        )
    return gamma


def max_within(
    alphabet: DistributedAlphabet, tracker: PrimalityTracker, gamma: frozenset
) -> bool:
    """Every maximal event of the tracked trace touches gamma."""
    return all(
        alphabet.dom[letter] & gamma for letter in tracker.maximal_letters(alphabet)
    )


def is_gamma_infinite_lasso(
    alphabet: DistributedAlphabet,
    gamma: Iterable[Process],
    u: Iterable[Letter],
    v: Iterable[Letter],
    power: Optional[int] = None,
) -> bool:
    gamma = _check_gamma(alphabet, gamma)
    u, v = alphabet.check_word(u), alphabet.check_word(v)
    if not v:
        raise MonitoringError("The loop of a lasso must be non-empty")
    if power is None:
        power = len(alphabet.processes) + 1

    active = frozenset().union(*(alphabet.dom[a] for a in v))
    if not gamma <= active:
        return False

    if len(letter_components(alphabet, set(u + v))) != 1:
        return False

    # Events of u and of the first copy of v that miss gamma must sit
    # strictly below an event touching gamma.
    trace = trace_of_word(alphabet, u + v * power)
    touching = [f for f in trace if alphabet.dom[trace.label(f)] & gamma]
    for e in range(len(u) + len(v)):
        if alphabet.dom[trace.label(e)] & gamma:
            continue
        if not any(f != e and trace.precedes(e, f) for f in touching):
            return False
    return True


@dataclass(frozen=True)
class MullerWitness:
    target: tuple[tuple[Process, frozenset[LocalState]], ...]
    access: Word
    loop: Word
    state: GlobalState


def _loop_search(
    automaton: AsyncAutomaton,
    start: GlobalState,
    target: Mapping[Process, frozenset[LocalState]],
    gamma: frozenset,
    bound: int,
) -> tuple[Optional[Word], bool]:
    """Shortest loop at ``start`` visiting exactly ``target`` on gamma.
    The flag reports whether the search was cut short by ``bound``."""
    alphabet = automaton.alphabet
    order = sorted(gamma)
    empty = tuple(frozenset() for _ in order)
    initial = (start, empty, PrimalityTracker())
    seen = {initial}
    frontier = deque([(initial, ())])
    truncated = False

    while frontier:
        (state, visited, tracker), word = frontier.popleft()
        if len(word) >= bound:
            truncated = True
            continue
        for letter in alphabet.letters:
            for successor in automaton.step(state, letter)[:1]:
                updated = list(visited)
                pruned = False
                for i, process in enumerate(order):
                    if process in alphabet.dom[letter]:
                        local = automaton.local_state(successor, process)
                        if local not in target[process]:
                            pruned = True
                        updated[i] = updated[i] | {local}
                if pruned:
                    continue

                node = (successor, tuple(updated), tracker.step(alphabet, letter))
                extended = word + (letter,)
                if (
                    successor == start
                    and all(updated[i] == target[p] for i, p in enumerate(order))
                    and max_within(alphabet, node[2], gamma)
                ):
                    return extended, False
                if node not in seen:
                    seen.add(node)
                    frontier.append((node, extended))

    return None, truncated


def _access_search(
    automaton: AsyncAutomaton, goal: GlobalState, gamma: frozenset, bound: int
) -> tuple[Optional[Word], bool]:
    """Shortest connected word reaching ``goal`` whose maximal events touch gamma."""
    alphabet = automaton.alphabet
    if goal == automaton.initial_state:
        return (), False

    initial = (automaton.initial_state, PrimalityTracker(), frozenset())
    seen = {initial}
    frontier = deque([(initial, ())])
    truncated = False

    while frontier:
        (state, tracker, used), word = frontier.popleft()
        if len(word) >= bound:
            truncated = True
            continue
        for letter in alphabet.letters:
            for successor in automaton.step(state, letter)[:1]:
                node = (successor, tracker.step(alphabet, letter), used | {letter})
                extended = word + (letter,)
                if (
                    successor == goal
                    and len(letter_components(alphabet, node[2])) == 1
                    and max_within(alphabet, node[1], gamma)
                ):
                    return extended, False
                if node not in seen:
                    seen.add(node)
                    frontier.append((node, extended))

    return None, truncated


def find_muller_witness(
    automaton: AsyncAutomaton,
    target: Mapping[Process, Iterable[LocalState]],
    gamma: Iterable[Process],
    bound: int,
) -> Optional[MullerWitness]:
    if not automaton.is_deterministic:
        raise NotDeterministic("Muller witnesses need a deterministic automaton")
    gamma = _check_gamma(automaton.alphabet, gamma)
    target = {p: frozenset(target[p]) for p in sorted(gamma)}
    if bound <= 0:
        raise BoundExceeded("Witness search needs a positive bound")
    if not all(target.values()):
        # Every gamma process must act in the loop.
        return None

    truncated = False
    for state in automaton.global_expansion().states:
        loop, cut = _loop_search(automaton, state, target, gamma, bound)
        truncated = truncated or cut
        if loop is None:
            continue
        access, cut = _access_search(automaton, state, gamma, bound)
        truncated = truncated or cut
        if access is not None:
            return MullerWitness(tuple(target.items()), access, loop, state)

    if truncated:
        raise BoundExceeded("No witness within {} letters".format(bound))
    return None


def undetermined_pair(automaton: AsyncAutomaton) -> Optional[tuple[Word, Word]]:
    """Two words whose maximal events cover the same processes in the same
    local states but that end in different global states, or None."""
    alphabet = automaton.alphabet

    def successors(node):
        state, tracker = node
        return [
            (letter, (successor, tracker.step(alphabet, letter)))
            for letter in alphabet.letters
            for successor in automaton.step(state, letter)[:1]
        ]

    initial = (automaton.initial_state, PrimalityTracker())
    words = words_from(explore_labelled([initial], successors), initial)

    seen: dict[tuple, tuple[GlobalState, Word]] = {}
    for (state, tracker), word in words.items():
        processes = sorted(
            set().union(*(alphabet.dom[a] for a in tracker.maximal_letters(alphabet)))
        )
        key = (
            tuple(processes),
            tuple(automaton.local_state(state, p) for p in processes),
        )
        other_state, other_word = seen.setdefault(key, (state, word))
        if other_state != state:
            return other_word, word
    return None


@dataclass(frozen=True, eq=False)
class Conversion:
    automaton: AsyncAutomaton
    condition: AcceptanceCondition
    dropped: tuple
    witnesses: tuple[MullerWitness, ...]


def muller_to_buchi(
    automaton: AsyncAutomaton,
    condition: AcceptanceCondition,
    bound: int,
    single_tuple: bool = False,
    strict: bool = False,
) -> Conversion:
    """Replace a Muller condition by "every state of T recurs" over the
    targets T that some Γ-infinite run can actually meet.

    The rewrite relies on the local states of the processes of the maximal
    events determining the whole global state. When some pair of words breaks
    this the conversion warns, or refuses when ``strict`` is set."""
    if condition.kind is not AcceptanceKind.MULLER:
        raise MonitoringError("Only Muller conditions can be converted")
    if not automaton.is_deterministic:
        raise NotDeterministic("Conversion needs a deterministic automaton")
    condition.validate(automaton)

    pair = undetermined_pair(automaton)
    if pair is not None:
        message = (
            "Maximal processes do not determine the global state after "
            "'{}' and '{}'".format(*(" ".join(word) for word in pair))
        )
        if strict:
            raise ConversionRefused(message)
        click.echo(click.style(message, fg="yellow"), err=True)

    surviving, dropped, witnesses = [], [], []
    for target in condition.targets:
        try:
            witness = find_muller_witness(
                automaton, dict(target), condition.gamma, bound
            )
        except BoundExceeded as error:
            raise ConversionRefused(
                "Target {} undecided within bound {}".format(
                    _describe_target(target), bound
                )
            ) from error
        if witness is None:
            dropped.append(target)
        else:
            surviving.append(target)
            witnesses.append(witness)

    if not single_tuple:
        return Conversion(
            automaton,
            AcceptanceCondition.generalized(
                condition.gamma, [dict(t) for t in surviving]
            ),
            tuple(dropped),
            tuple(witnesses),
        )

    augmented, buchi = _counter_augmentation(
        automaton, condition.gamma, [dict(t) for t in surviving]
    )
    return Conversion(augmented, buchi, tuple(dropped), tuple(witnesses))


def _describe_target(target) -> str:
    return " ".join(
        "{}:{{{}}}".format(p, ",".join(sorted(states))) for p, states in target
    )


def _augmented_name(local: LocalState, counters: tuple, flags: tuple) -> LocalState:
    return "{}/{}/{}".format(
        local, ".".join(str(c) for c in counters), "".join(str(f) for f in flags)
    )


def _counter_augmentation(
    automaton: AsyncAutomaton,
    gamma: tuple[Process, ...],
    targets: list[dict[Process, frozenset[LocalState]]],
) -> tuple[AsyncAutomaton, AcceptanceCondition]:
    """Single-tuple Büchi form: each gamma process counts through every
    target's sorted state list and raises a flag whenever a round completes."""
    cycles = {
        p: [sorted(target[p]) for target in targets] for p in gamma
    }

    def variants(process: Process, local: LocalState) -> list[LocalState]:
        if process not in gamma:
            return [local]
        ranges = [range(len(cycle)) for cycle in cycles[process]]
        return [
            _augmented_name(local, counters, flags)
            for counters in itertools.product(*ranges)
            for flags in itertools.product((0, 1), repeat=len(targets))
        ]

    def advance(process: Process, name: LocalState, local: LocalState) -> LocalState:
        if process not in gamma:
            return local
        _, counter_text, _ = name.split("/")
        counters = [int(c) for c in counter_text.split(".") if c != ""]
        flags = []
        for k, cycle in enumerate(cycles[process]):
            wrapped = 0
            if cycle[counters[k]] == local:
                counters[k] = (counters[k] + 1) % len(cycle)
                wrapped = int(counters[k] == 0)
            flags.append(wrapped)
        return _augmented_name(local, tuple(counters), tuple(flags))

    local_states = {
        p: tuple(v for s in automaton.local_states[p] for v in variants(p, s))
        for p in automaton.alphabet.process_order
    }
    initial = {
        p: (
            _augmented_name(
                automaton.initial[p],
                tuple(0 for _ in targets),
                tuple(0 for _ in targets),
            )
            if p in gamma
            else automaton.initial[p]
        )
        for p in automaton.alphabet.process_order
    }

    transitions = {}
    for letter, pairs in automaton.transitions.items():
        participants = automaton.participants(letter)
        augmented = []
        for src, dst in pairs:
            choices = [variants(p, s) for p, s in zip(participants, src)]
            for names in itertools.product(*choices):
                augmented.append(
                    (
                        names,
                        tuple(
                            advance(p, name, local)
                            for p, name, local in zip(participants, names, dst)
                        ),
                    )
                )
        transitions[letter] = tuple(augmented)

    result = AsyncAutomaton(automaton.alphabet, local_states, initial, transitions)

    tuples = []
    for k in range(len(targets)):
        allowed = [
            [
                name
                for name in local_states[p]
                if name.split("/")[2][k] == "1"
            ]
            for p in gamma
        ]
        for combination in itertools.product(*allowed):
            tuples.append(dict(zip(gamma, combination)))

    return result, AcceptanceCondition.buchi(gamma, tuples)


def buchi_witness_membership(
    automaton: AsyncAutomaton,
    target: Mapping[Process, LocalState],
    count: int,
    process: Process,
    prime: Trace,
) -> bool:
    """At least ``count`` events on ``process`` leave it in ``target[process]``."""
    if not automaton.is_deterministic:
        raise NotDeterministic("Witness sets need a deterministic automaton")
    if not prime.is_prime:
        raise NotPrime("{!r} is not a prime trace".format(prime))
    (top,) = prime.maximal_events
    if process not in prime.alphabet.dom[prime.label(top)]:
        raise MonitoringError(
            "Process {!r} does not take part in the maximal event".format(process)
        )

    hits = 0
    state = automaton.initial_state
    for letter in prime.normal_form:
        successors = automaton.step(state, letter)
        if not successors:
            return False
        state = successors[0]
        if process in prime.alphabet.dom[letter]:
            if automaton.local_state(state, process) == target[process]:
                hits += 1
    return hits >= count


def lasso_in_gamma_language(
    automaton: AsyncAutomaton,
    condition: AcceptanceCondition,
    u: Iterable[Letter],
    v: Iterable[Letter],
) -> bool:
    """Acceptance restricted to Γ-infinite lassos; others are rejected."""
    if not is_gamma_infinite_lasso(automaton.alphabet, condition.gamma, u, v):
        return False
    return accepts_lasso_async(automaton, condition, u, v)
