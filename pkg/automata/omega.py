import itertools
import os
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Optional

import networkx as nx

from automata import (
    AutomatonError,
    ComplementCapExceeded,
    NotDeterministic,
    NotTraceClosed,
    can_reach,
    cyclic_components,
    explore,
    explore_labelled,
    has_accepting_cycle,
    shortest_cycle,
    shortest_paths,
    words_from,
)
from traces import DistributedAlphabet, Letter, Word, as_word

COMPLEMENT_STATE_CAP = int(os.environ.get("TRACE_MONITORS_COMPLEMENT_CAP", "8"))
LASSO_BOUND = int(os.environ.get("TRACE_MONITORS_LASSO_BOUND", "3"))
PREFIX_SWAP_DEPTH = 6

State = Hashable
Transition = tuple[State, Letter, State]


class ResidualClass(Enum):
    EMPTY = "empty"
    UNIVERSAL = "universal"
    OTHER = "other"

    @property
    def is_good(self) -> bool:
        return self is not ResidualClass.OTHER


@dataclass(frozen=True, eq=False)
class BuchiAutomaton:
    states: tuple[State, ...]
    initial: State
    accepting: frozenset[State]
    transitions: frozenset[Transition]
    letters: tuple[Letter, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "letters", tuple(sorted(set(self.letters))))

        declared = set(self.states)
        if len(declared) != len(self.states):
            raise AutomatonError("Duplicate state declarations")
        if self.initial not in declared:
            raise AutomatonError("Initial state {!r} not declared".format(self.initial))
        if not self.accepting <= declared:
            raise AutomatonError("Accepting states must be declared states")
        for source, letter, target in self.transitions:
            if source not in declared or target not in declared:
                raise AutomatonError(
                    "Transition {!r} uses undeclared states".format(
                        (source, letter, target)
                    )
                )
            if letter not in self.letters:
                raise AutomatonError(
                    "Transition {!r} uses undeclared letter".format(
                        (source, letter, target)
                    )
                )

    def __len__(self) -> int:
        return len(self.states)

    @cached_property
    def state_index(self) -> dict[State, int]:
        return {state: i for i, state in enumerate(self.states)}

    @cached_property
    def successor_map(self) -> dict[tuple[State, Letter], tuple[State, ...]]:
        result: dict[tuple[State, Letter], list[State]] = {}
        for source, letter, target in self.transitions:
            result.setdefault((source, letter), []).append(target)
        return {
            key: tuple(sorted(targets, key=self.state_index.__getitem__))
            for key, targets in result.items()
        }

    def successors(self, state: State, letter: Letter) -> tuple[State, ...]:
        return self.successor_map.get((state, letter), ())

    def post(self, subset: Iterable[State], letter: Letter) -> frozenset[State]:
        return frozenset(
            target for state in subset for target in self.successors(state, letter)
        )

    def post_word(
        self, subset: Iterable[State], word: Iterable[Letter]
    ) -> frozenset[State]:
        current = frozenset(subset)
        for letter in as_word(word):
            current = self.post(current, letter)
        return current

    def subset_after(self, word: Iterable[Letter]) -> frozenset[State]:
        return self.post_word({self.initial}, word)

    @property
    def is_deterministic(self) -> bool:
        return all(len(targets) <= 1 for targets in self.successor_map.values())

    @property
    def is_looping(self) -> bool:
        """All states accepting: the language is the set of infinite runs."""
        return self.accepting == frozenset(self.states)

    def reachable_from(self, subset: Iterable[State]) -> set[State]:
        graph = explore(
            subset,
            lambda q: [t for a in self.letters for t in self.successors(q, a)],
        )
        return set(graph)

    def with_letters(self, letters: Iterable[Letter]) -> "BuchiAutomaton":
        letters = set(letters)
        if letters <= set(self.letters):
            return self
        return BuchiAutomaton(
            self.states,
            self.initial,
            self.accepting,
            self.transitions,
            tuple(set(self.letters) | letters),
        )

    @cached_property
    def _state_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.states)
        graph.add_edges_from(
            (q, t)
            for q in self.states
            for a in self.letters
            for t in self.successors(q, a)
        )
        return graph

    @cached_property
    def live_states(self) -> frozenset[State]:
        """States with a non-empty residual language."""
        graph = self._state_graph
        cycling: set[State] = set()
        for component in cyclic_components(graph):
            cycling.update(q for q in component if q in self.accepting)
        return frozenset(can_reach(graph, cycling))

    @cached_property
    def universal_sink_states(self) -> frozenset[State]:
        """States whose whole reachable part is accepting and complete."""
        graph = self._state_graph
        bad = {
            q
            for q in self.states
            if q not in self.accepting
            or any(not self.successors(q, a) for a in self.letters)
        }
        return frozenset(self.states) - can_reach(graph, bad)

    @cached_property
    def _residual_cache(self) -> dict[frozenset[State], ResidualClass]:
        return {}

    def is_empty_from(self, subset: Iterable[State]) -> bool:
        return not (frozenset(subset) & self.live_states)

    def residual_class(self, subset: Iterable[State]) -> ResidualClass:
        subset = frozenset(subset)
        if subset not in self._residual_cache:
            if self.is_empty_from(subset):
                result = ResidualClass.EMPTY
            elif self.is_universal_from(subset):
                result = ResidualClass.UNIVERSAL
            else:
                result = ResidualClass.OTHER
            self._residual_cache[subset] = result
        return self._residual_cache[subset]

    def is_universal_from(self, subset: Iterable[State]) -> bool:
        subset = frozenset(subset)
        if not self.letters:
            return False
        if not subset:
            return False
        if subset & self.universal_sink_states:
            return True

        reachable = self.reachable_from(subset)
        if len(subset) == 1 and all(
            len(self.successors(q, a)) <= 1 for q in reachable for a in self.letters
        ):
            return self._deterministic_universal(next(iter(subset)), reachable)

        if reachable <= self.accepting:
            return not self._subset_graph_hits_empty(subset)

        verdict = self._subset_graph_universality(subset)
        if verdict is not None:
            return verdict

        if self._short_rejected_lasso(subset):
            return False

        return not self._rank_complement_nonempty(subset, reachable)

    def _deterministic_universal(self, state: State, reachable: set[State]) -> bool:
        if any(not self.successors(q, a) for q in reachable for a in self.letters):
            return False
        rejecting = self._state_graph.subgraph(
            q for q in reachable if q not in self.accepting
        )
        return not cyclic_components(rejecting)

    def _subset_graph(
        self, subset: frozenset[State], stop: Callable[[frozenset[State]], bool]
    ) -> nx.DiGraph:
        return explore_labelled(
            [subset],
            lambda node: []
            if stop(node)
            else [(a, self.post(node, a)) for a in self.letters],
        )

    def _subset_graph_hits_empty(self, subset: frozenset[State]) -> bool:
        return frozenset() in self._subset_graph(subset, lambda node: False)

    def _subset_graph_universality(self, subset: frozenset[State]) -> Optional[bool]:
        sinks = self.universal_sink_states

        def settled(node: frozenset[State]) -> bool:
            return bool(node & sinks)

        graph = self._subset_graph(subset, settled)
        if frozenset() in graph:
            return False

        open_graph = graph.subgraph(node for node in graph if not settled(node))
        components = cyclic_components(open_graph)
        if not components:
            # Every word eventually reaches a subset holding a universal sink.
            return True

        paths = words_from(open_graph, subset)
        for component in components:
            inside = open_graph.subgraph(component)
            for node in component:
                loop = shortest_cycle(inside, node)
                if loop and not self.accepts_lasso(paths[node], loop, subset):
                    return False
        return None

    def _short_rejected_lasso(self, subset: frozenset[State]) -> bool:
        for u in _words_up_to(self.letters, LASSO_BOUND):
            for v in _words_up_to(self.letters, LASSO_BOUND):
                if v and not self.accepts_lasso(u, v, subset):
                    return True
        return False

    def _rank_complement_nonempty(
        self, subset: frozenset[State], reachable: set[State]
    ) -> bool:
        if len(reachable) > COMPLEMENT_STATE_CAP:
            raise ComplementCapExceeded(len(reachable), COMPLEMENT_STATE_CAP)
        ranking = _RankComplement(self, reachable)
        graph = explore([ranking.initial(subset)], ranking.all_successors)
        return has_accepting_cycle(graph, ranking.is_accepting)

    def accepts_lasso(
        self,
        u: Iterable[Letter],
        v: Iterable[Letter],
        initial: Optional[Iterable[State]] = None,
    ) -> bool:
        u, v = as_word(u), as_word(v)
        if not v:
            raise AutomatonError("The loop of a lasso must be non-empty")

        word = u + v
        start = frozenset(initial) if initial is not None else {self.initial}

        def successors(node: tuple[State, int]) -> list[tuple[State, int]]:
            state, position = node
            following = position + 1 if position + 1 < len(word) else len(u)
            return [(t, following) for t in self.successors(state, word[position])]

        graph = explore([(q, 0) for q in start], successors)
        return has_accepting_cycle(graph, lambda node: node[0] in self.accepting)

    @classmethod
    def union(cls, automata: Iterable["BuchiAutomaton"]) -> "BuchiAutomaton":
        automata = list(automata)
        letters = tuple(sorted(set().union(*(set(b.letters) for b in automata))))
        start = ("union",)

        def successors(node, letter):
            if node == start:
                return [
                    (i, t)
                    for i, b in enumerate(automata)
                    for t in b.successors(b.initial, letter)
                ]
            i, q = node
            return [(i, t) for t in automata[i].successors(q, letter)]

        def accepting(node):
            if node == start:
                return any(b.initial in b.accepting for b in automata)
            i, q = node
            return q in automata[i].accepting

        return _build(start, letters, successors, accepting)


def _build(
    initial: State,
    letters: Iterable[Letter],
    successors: Callable[[State, Letter], Iterable[State]],
    accepting: Callable[[State], bool],
    cap: Optional[int] = None,
) -> BuchiAutomaton:
    """Materialise the reachable part of a lazily described automaton with
    states renamed ``s0, s1, ...`` in breadth-first order."""
    letters = tuple(sorted(set(letters)))
    graph = explore(
        [initial],
        lambda node: [t for a in letters for t in successors(node, a)],
        cap,
    )
    names = {node: "s{}".format(i) for i, node in enumerate(graph)}
    transitions = {
        (names[node], a, names[t])
        for node in graph
        for a in letters
        for t in successors(node, a)
    }
    return BuchiAutomaton(
        tuple(names.values()),
        names[initial],
        frozenset(names[n] for n in graph if accepting(n)),
        frozenset(transitions),
        letters,
    )


def _words_up_to(letters: Iterable[Letter], length: int) -> Iterator[Word]:
    letters = tuple(letters)
    for size in range(length + 1):
        yield from itertools.product(letters, repeat=size)


class _RankComplement:
    """Level-ranking complementation restricted to the states reachable from
    the starting subset. Ranks are bounded by 2·|Q∖F| and accepting states
    only carry even ranks."""

    def __init__(self, automaton: BuchiAutomaton, reachable: set[State]) -> None:
        self.automaton = automaton
        self.order = sorted(reachable, key=automaton.state_index.__getitem__)
        self.max_rank = 2 * len([q for q in reachable if q not in automaton.accepting])

    def initial(self, subset: frozenset[State]):
        ranking = tuple((q, self.max_rank) for q in self.order if q in subset)
        return (ranking, frozenset())

    @staticmethod
    def is_accepting(node) -> bool:
        return not node[1]

    def successors(self, node, letter: Letter):
        ranking, obligations = node
        automaton = self.automaton
        bounds: dict[State, int] = {}
        for state, rank in ranking:
            for target in automaton.successors(state, letter):
                bounds[target] = min(bounds.get(target, rank), rank)

        targets = [q for q in self.order if q in bounds]
        options = [
            [
                r
                for r in range(bounds[q] + 1)
                if q not in automaton.accepting or r % 2 == 0
            ]
            for q in targets
        ]
        obligation_targets = automaton.post(obligations, letter)

        for ranks in itertools.product(*options):
            next_ranking = tuple(zip(targets, ranks))
            even = {q for q, r in next_ranking if r % 2 == 0}
            if obligations:
                next_obligations = frozenset(obligation_targets & even)
            else:
                next_obligations = frozenset(even)
            yield (next_ranking, next_obligations)

    def all_successors(self, node):
        return [s for a in self.automaton.letters for s in self.successors(node, a)]


def residual_class(
    automaton: BuchiAutomaton, subset: Iterable[State]
) -> ResidualClass:
    return automaton.residual_class(subset)


def accepts_lasso(
    automaton: BuchiAutomaton, u: Iterable[Letter], v: Iterable[Letter]
) -> bool:
    return automaton.accepts_lasso(u, v)


def complement(automaton: BuchiAutomaton) -> BuchiAutomaton:
    """An automaton for Σ^ω minus L(automaton).

    Looping automata use the subset construction with an accepting empty
    subset, deterministic ones the two-copy construction, and everything
    else the rank-based construction under the state cap."""
    letters = automaton.letters

    if automaton.is_looping:
        return _build(
            frozenset({automaton.initial}),
            letters,
            lambda node, a: [automaton.post(node, a)],
            lambda node: not node,
        )

    if automaton.is_deterministic:
        sink = ("sink",)

        def step(state, letter):
            if state == sink:
                return sink
            targets = automaton.successors(state, letter)
            return targets[0] if targets else sink

        def rejecting(state) -> bool:
            return state == sink or state not in automaton.accepting

        def successors(node, letter):
            copy, state = node
            target = step(state, letter)
            result = []
            if copy == 1:
                result.append((1, target))
            if rejecting(target):
                result.append((2, target))
            return result

        return _build(
            (1, automaton.initial), letters, successors, lambda node: node[0] == 2
        )

    reachable = automaton.reachable_from({automaton.initial})
    if len(reachable) > COMPLEMENT_STATE_CAP:
        raise ComplementCapExceeded(len(reachable), COMPLEMENT_STATE_CAP)

    ranking = _RankComplement(automaton, reachable)
    return _build(
        ranking.initial(frozenset({automaton.initial})),
        letters,
        lambda node, a: list(ranking.successors(node, a)),
        ranking.is_accepting,
    )


def intersection_is_empty(left: BuchiAutomaton, right: BuchiAutomaton) -> bool:
    letters = [a for a in left.letters if a in right.letters]

    def successors(node):
        p, q, phase = node
        if phase == 0 and p in left.accepting:
            phase = 1
        elif phase == 1 and q in right.accepting:
            phase = 0
        return [
            (p2, q2, phase)
            for a in letters
            for p2 in left.successors(p, a)
            for q2 in right.successors(q, a)
        ]

    graph = explore([(left.initial, right.initial, 0)], successors)
    return not has_accepting_cycle(
        graph, lambda node: node[2] == 0 and node[0] in left.accepting
    )


def safety_closure(automaton: BuchiAutomaton) -> BuchiAutomaton:
    """The limit closure of L(automaton) as a looping automaton."""
    live = automaton.live_states
    if automaton.initial not in live:
        return BuchiAutomaton(
            (automaton.initial,),
            automaton.initial,
            frozenset(),
            frozenset(),
            automaton.letters,
        )
    return BuchiAutomaton(
        tuple(q for q in automaton.states if q in live),
        automaton.initial,
        frozenset(q for q in automaton.states if q in live),
        frozenset(
            (p, a, q) for p, a, q in automaton.transitions if p in live and q in live
        ),
        automaton.letters,
    )


def is_safety(automaton: BuchiAutomaton) -> bool:
    return intersection_is_empty(safety_closure(automaton), complement(automaton))


def swap_automaton(
    automaton: BuchiAutomaton, alphabet: DistributedAlphabet
) -> BuchiAutomaton:
    """Accepts L(automaton) plus every word obtained from one of its words
    by one adjacent transposition of independent letters."""
    letters = automaton.letters

    def successors(node, letter):
        phase = node[0]
        if phase == "pending":
            _, state, first = node
            if not alphabet.independent(letter, first):
                return []
            return [
                ("after", target)
                for middle in automaton.successors(state, letter)
                for target in automaton.successors(middle, first)
            ]

        state = node[1]
        result = [(phase, target) for target in automaton.successors(state, letter)]
        if phase == "before":
            result.append(("pending", state, letter))
        return result

    def accepting(node) -> bool:
        return node[0] != "pending" and node[1] in automaton.accepting

    return _build(("before", automaton.initial), letters, successors, accepting)


def swap_closed_check(
    automaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
    complemented: Optional[BuchiAutomaton] = None,
) -> bool:
    if complemented is None:
        complemented = complement(automaton)
    return intersection_is_empty(swap_automaton(automaton, alphabet), complemented)


def prefix_swap_closed(
    automaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
    depth: int = PREFIX_SWAP_DEPTH,
) -> bool:
    """Finite-prefix check: extendability into L is invariant under swaps."""
    live = automaton.live_states
    extendable: dict[Word, bool] = {}

    def walk(word: Word, subset: frozenset[State]) -> None:
        extendable[word] = bool(subset & live)
        if len(word) < depth:
            for letter in automaton.letters:
                walk(word + (letter,), automaton.post(subset, letter))

    walk((), frozenset({automaton.initial}))

    for word, verdict in extendable.items():
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a != b and alphabet.independent(a, b):
                swapped = word[:i] + (b, a) + word[i + 2 :]
                if extendable[swapped] != verdict:
                    return False
    return True


def validate_trace_closed(
    automaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
    complemented: Optional[BuchiAutomaton] = None,
) -> None:
    if not set(automaton.letters) <= set(alphabet.letters):
        raise NotTraceClosed("Automaton uses letters outside the alphabet")
    if not prefix_swap_closed(automaton, alphabet):
        raise NotTraceClosed("Prefix language is not closed under swaps")
    if not swap_closed_check(automaton, alphabet, complemented):
        raise NotTraceClosed("Language is not closed under swaps")


@dataclass(frozen=True, eq=False)
class Nfa:
    states: tuple[State, ...]
    initial: State
    accepting: frozenset[State]
    transitions: frozenset[Transition]
    letters: tuple[Letter, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "letters", tuple(sorted(set(self.letters))))

        declared = set(self.states)
        if self.initial not in declared or not self.accepting <= declared:
            raise AutomatonError("Initial and accepting states must be declared")
        for source, letter, target in self.transitions:
            if source not in declared or target not in declared:
                raise AutomatonError("Transition uses undeclared states")
            if letter not in self.letters:
                raise AutomatonError("Transition uses undeclared letter")

    @cached_property
    def successor_map(self) -> dict[tuple[State, Letter], tuple[State, ...]]:
        index = {state: i for i, state in enumerate(self.states)}
        result: dict[tuple[State, Letter], list[State]] = {}
        for source, letter, target in self.transitions:
            result.setdefault((source, letter), []).append(target)
        return {k: tuple(sorted(v, key=index.__getitem__)) for k, v in result.items()}

    def successors(self, state: State, letter: Letter) -> tuple[State, ...]:
        return self.successor_map.get((state, letter), ())

    def post(self, subset: Iterable[State], letter: Letter) -> frozenset[State]:
        return frozenset(t for q in subset for t in self.successors(q, letter))

    def accepts(self, word: Iterable[Letter]) -> bool:
        current = frozenset({self.initial})
        for letter in as_word(word):
            current = self.post(current, letter)
        return bool(current & self.accepting)

    @property
    def is_deterministic(self) -> bool:
        return all(len(targets) <= 1 for targets in self.successor_map.values())

    @property
    def is_complete(self) -> bool:
        return all(self.successors(q, a) for q in self.states for a in self.letters)

    def is_universal(self) -> bool:
        graph = explore(
            [frozenset({self.initial})],
            lambda subset: [self.post(subset, a) for a in self.letters],
        )
        return all(subset & self.accepting for subset in graph)

    def completed(self, sink: State = "sink") -> "Nfa":
        if self.is_complete:
            return self
        while sink in self.states:
            sink = "{}'".format(sink)
        extra = {
            (q, a, sink)
            for q in self.states + (sink,)
            for a in self.letters
            if q == sink or not self.successors(q, a)
        }
        return type(self)(
            self.states + (sink,),
            self.initial,
            self.accepting,
            self.transitions | extra,
            self.letters,
        )


@dataclass(frozen=True, eq=False)
class Dfa(Nfa):
    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.is_deterministic:
            raise NotDeterministic("Automaton has two successors on one letter")

    def step(self, state: Optional[State], letter: Letter) -> Optional[State]:
        if state is None:
            return None
        targets = self.successors(state, letter)
        return targets[0] if targets else None

    def run(self, word: Iterable[Letter]) -> Optional[State]:
        state: Optional[State] = self.initial
        for letter in as_word(word):
            state = self.step(state, letter)
        return state

    def accepts(self, word: Iterable[Letter]) -> bool:
        return self.run(word) in self.accepting

    def trimmed(self) -> "Dfa":
        """Drop unreachable states and states that cannot reach acceptance."""
        graph = explore(
            [self.initial],
            lambda q: [t for a in self.letters for t in self.successors(q, a)],
        )
        useful = can_reach(graph, [q for q in graph if q in self.accepting])
        if self.initial not in useful:
            return Dfa(
                (self.initial,), self.initial, frozenset(), frozenset(), self.letters
            )
        return Dfa(
            tuple(q for q in self.states if q in useful),
            self.initial,
            frozenset(q for q in self.accepting if q in useful),
            frozenset(
                (p, a, q) for p, a, q in self.transitions if p in useful and q in useful
            ),
            self.letters,
        )

    def minimized(self) -> "Dfa":
        """Minimal complete DFA (Moore refinement); states named m0, m1, ..."""
        complete = self.completed()
        graph = explore(
            [complete.initial],
            lambda q: [complete.step(q, a) for a in complete.letters],
        )
        reachable = list(graph)
        block = {q: int(q in complete.accepting) for q in reachable}

        while True:
            signature = {
                q: (block[q],)
                + tuple(block[complete.step(q, a)] for a in complete.letters)
                for q in reachable
            }
            numbering: dict[tuple, int] = {}
            for q in reachable:
                numbering.setdefault(signature[q], len(numbering))
            refined = {q: numbering[signature[q]] for q in reachable}
            if len(set(refined.values())) == len(set(block.values())):
                block = refined
                break
            block = refined

        name = {b: "m{}".format(b) for b in set(block.values())}
        return Dfa(
            tuple(name[b] for b in sorted(name)),
            name[block[complete.initial]],
            frozenset(name[block[q]] for q in reachable if q in complete.accepting),
            frozenset(
                (name[block[q]], a, name[block[complete.step(q, a)]])
                for q in reachable
                for a in complete.letters
            ),
            complete.letters,
        )


def dfa_prefix_closed(dfa: Dfa) -> bool:
    trimmed = dfa.trimmed()
    return set(trimmed.states) == set(trimmed.accepting) or not trimmed.accepting


def forward_diamond_violation(
    dfa: Dfa, alphabet: DistributedAlphabet
) -> Optional[tuple[Word, Letter, Letter]]:
    """Shortest u with ua, ub defined, (a, b) independent and uab undefined."""
    trimmed = dfa.trimmed()
    if not trimmed.accepting:
        return None

    paths = shortest_paths(
        trimmed.initial,
        lambda q: [
            (a, trimmed.step(q, a))
            for a in trimmed.letters
            if trimmed.step(q, a) is not None
        ],
    )
    for state, word in sorted(paths.items(), key=lambda item: (len(item[1]), item[1])):
        for a, b in alphabet.independent_pairs:
            if a not in trimmed.letters or b not in trimmed.letters:
                continue
            left, right = trimmed.step(state, a), trimmed.step(state, b)
            if left is not None and right is not None:
                if trimmed.step(left, b) is None:
                    return word, a, b
    return None


def dfa_forward_diamond(dfa: Dfa, alphabet: DistributedAlphabet) -> bool:
    return forward_diamond_violation(dfa, alphabet) is None


def dfa_trace_closed(dfa: Dfa, alphabet: DistributedAlphabet) -> bool:
    minimal = dfa.minimized()
    for state in minimal.states:
        for a, b in alphabet.independent_pairs:
            if a in minimal.letters and b in minimal.letters:
                ab = minimal.step(minimal.step(state, a), b)
                ba = minimal.step(minimal.step(state, b), a)
                if ab != ba:
                    return False
    return True
