from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Union

import click

from automata import AutomatonError, NotDeterministic, explore
from automata.omega import BuchiAutomaton, Dfa
from traces import DistributedAlphabet, Letter, Process

LocalState = str
GlobalState = tuple[LocalState, ...]
LocalTransition = tuple[tuple[LocalState, ...], tuple[LocalState, ...]]


@dataclass(frozen=True)
class Stuck:
    position: int


@dataclass(frozen=True, eq=False)
class AsyncAutomaton:
    """Per-process local states with joint transitions on shared letters.

    ``transitions[a]`` lists ``(before, after)`` pairs of local-state tuples
    over the participants of ``a`` in sorted process order, in declaration
    order."""

    alphabet: DistributedAlphabet
    local_states: Mapping[Process, tuple[LocalState, ...]]
    initial: Mapping[Process, LocalState]
    transitions: Mapping[Letter, tuple[LocalTransition, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "local_states",
            {p: tuple(s) for p, s in sorted(self.local_states.items())},
        )
        object.__setattr__(self, "initial", dict(sorted(self.initial.items())))
        object.__setattr__(
            self,
            "transitions",
            {
                a: tuple((tuple(src), tuple(dst)) for src, dst in pairs)
                for a, pairs in sorted(self.transitions.items())
            },
        )

        for process in self.alphabet.process_order:
            if not self.local_states.get(process):
                raise AutomatonError("Process {!r} has no local states".format(process))
            if self.initial.get(process) not in self.local_states[process]:
                raise AutomatonError(
                    "Initial state of {!r} is not declared".format(process)
                )

        for letter, pairs in self.transitions.items():
            participants = self.participants(letter)
            for src, dst in pairs:
                if len(src) != len(participants) or len(dst) != len(participants):
                    raise AutomatonError(
                        "Transition on {!r} must cover {}".format(
                            letter, ",".join(participants)
                        )
                    )
                for process, before, after in zip(participants, src, dst):
                    declared = self.local_states[process]
                    if before not in declared or after not in declared:
                        raise AutomatonError(
                            "Transition on {!r} uses undeclared state of {!r}".format(
                                letter, process
                            )
                        )

    def participants(self, letter: Letter) -> tuple[Process, ...]:
        return tuple(sorted(self.alphabet.domain(letter)))

    @property
    def initial_state(self) -> GlobalState:
        return tuple(self.initial[p] for p in self.alphabet.process_order)

    @property
    def is_deterministic(self) -> bool:
        # Repeated identical pairs still define a function.
        return all(
            len(set(pairs)) == len({src for src, _ in pairs})
            for pairs in self.transitions.values()
        )

    def local_view(self, state: GlobalState, letter: Letter) -> tuple[LocalState, ...]:
        index = self.alphabet.process_index
        return tuple(state[index[p]] for p in self.participants(letter))

    def local_state(self, state: GlobalState, process: Process) -> LocalState:
        return state[self.alphabet.process_index[process]]

    def step(self, state: GlobalState, letter: Letter) -> list[GlobalState]:
        """Global successors in declaration order."""
        index = self.alphabet.process_index
        participants = self.participants(letter)
        before = self.local_view(state, letter)

        result = []
        for src, dst in self.transitions.get(letter, ()):
            if src == before:
                target = list(state)
                for process, local in zip(participants, dst):
                    target[index[process]] = local
                if tuple(target) not in result:
                    result.append(tuple(target))
        return result

    def enabled(self, state: GlobalState) -> list[Letter]:
        return [a for a in self.alphabet.letters if self.step(state, a)]

    def run_word(self, word: Iterable[Letter]) -> Union[GlobalState, Stuck]:
        word = self.alphabet.check_word(word)
        warned = False
        state = self.initial_state
        for position, letter in enumerate(word):
            successors = self.step(state, letter)
            if not successors:
                return Stuck(position)
            if len(successors) > 1 and not warned:
                click.echo(
                    click.style(
                        "Nondeterministic step on {!r}, taking the first declared "
                        "transition".format(letter),
                        fg="yellow",
                    ),
                    err=True,
                )
                warned = True
            state = successors[0]
        return state

    def global_expansion(self) -> "GlobalExpansion":
        letters = self.alphabet.letters
        graph = explore(
            [self.initial_state],
            lambda s: [t for a in letters for t in self.step(s, a)],
        )
        transitions = {
            (s, a): tuple(self.step(s, a))
            for s in graph
            for a in letters
            if self.step(s, a)
        }
        return GlobalExpansion(self, tuple(graph), self.initial_state, transitions)

    def describe_state(self, state: GlobalState) -> str:
        return ",".join(
            "{}={}".format(p, s) for p, s in zip(self.alphabet.process_order, state)
        )


@dataclass(frozen=True, eq=False)
class GlobalExpansion:
    automaton: AsyncAutomaton
    states: tuple[GlobalState, ...]
    initial: GlobalState
    transitions: Mapping[tuple[GlobalState, Letter], tuple[GlobalState, ...]]

    def __len__(self) -> int:
        return len(self.states)

    def _triples(self) -> frozenset:
        return frozenset(
            (s, a, t) for (s, a), targets in self.transitions.items() for t in targets
        )

    def to_dfa(self) -> Dfa:
        """Finite-word language with every global state final."""
        if not self.automaton.is_deterministic:
            raise NotDeterministic("Global expansion of a nondeterministic automaton")
        return Dfa(
            self.states,
            self.initial,
            frozenset(self.states),
            self._triples(),
            self.automaton.alphabet.letters,
        )

    def to_buchi(self) -> BuchiAutomaton:
        """Infinite runs of the automaton, every global state accepting."""
        return BuchiAutomaton(
            self.states,
            self.initial,
            frozenset(self.states),
            self._triples(),
            self.automaton.alphabet.letters,
        )


class AcceptanceKind(Enum):
    BUCHI = "buchi"
    MULLER = "muller"
    GENERALIZED_BUCHI = "generalized"


@dataclass(frozen=True)
class AcceptanceCondition:
    """Acceptance over the processes in ``gamma``.

    For BUCHI each target maps every process of gamma to one local state.
    For MULLER and GENERALIZED_BUCHI each target maps every process of gamma
    to a set of local states: MULLER asks for exactly that recurring set,
    GENERALIZED_BUCHI for every listed state to recur."""

    kind: AcceptanceKind
    gamma: tuple[Process, ...]
    targets: tuple[tuple[tuple[Process, object], ...], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.gamma:
            raise AutomatonError("Acceptance needs a non-empty set of processes")
        object.__setattr__(self, "gamma", tuple(sorted(set(self.gamma))))

        normalised = []
        for target in self.targets:
            target = dict(target)
            if set(target) != set(self.gamma):
                raise AutomatonError(
                    "Acceptance target must cover exactly {}".format(
                        ",".join(self.gamma)
                    )
                )
            if self.kind is AcceptanceKind.BUCHI:
                normalised.append(tuple((p, str(target[p])) for p in self.gamma))
            else:
                normalised.append(
                    tuple((p, frozenset(target[p])) for p in self.gamma)
                )
        object.__setattr__(self, "targets", tuple(normalised))

    @classmethod
    def buchi(
        cls, gamma: Iterable[Process], targets: Iterable[Mapping[Process, LocalState]]
    ) -> "AcceptanceCondition":
        return cls(
            AcceptanceKind.BUCHI,
            tuple(gamma),
            tuple(tuple(t.items()) for t in targets),
        )

    @classmethod
    def muller(
        cls,
        gamma: Iterable[Process],
        targets: Iterable[Mapping[Process, Iterable[LocalState]]],
    ) -> "AcceptanceCondition":
        return cls(
            AcceptanceKind.MULLER,
            tuple(gamma),
            tuple(tuple((p, frozenset(s)) for p, s in t.items()) for t in targets),
        )

    @classmethod
    def generalized(
        cls,
        gamma: Iterable[Process],
        targets: Iterable[Mapping[Process, Iterable[LocalState]]],
    ) -> "AcceptanceCondition":
        return cls(
            AcceptanceKind.GENERALIZED_BUCHI,
            tuple(gamma),
            tuple(tuple((p, frozenset(s)) for p, s in t.items()) for t in targets),
        )

    def validate(self, automaton: AsyncAutomaton) -> None:
        for process in self.gamma:
            if process not in automaton.alphabet.processes:
                raise AutomatonError("Unknown process {!r} in gamma".format(process))
        for target in self.targets:
            for process, value in target:
                states = {value} if isinstance(value, str) else value
                if not set(states) <= set(automaton.local_states[process]):
                    raise AutomatonError(
                        "Acceptance target uses undeclared state of {!r}".format(
                            process
                        )
                    )

    def accepts(self, recurring: Mapping[Process, frozenset[LocalState]]) -> bool:
        for target in self.targets:
            if self.kind is AcceptanceKind.BUCHI:
                hit = all(state in recurring[p] for p, state in target)
            elif self.kind is AcceptanceKind.MULLER:
                hit = all(recurring[p] == states for p, states in target)
            else:
                hit = all(states <= recurring[p] for p, states in target)
            if hit:
                return True
        return False


def recurring_local_states(
    automaton: AsyncAutomaton, u: Iterable[Letter], v: Iterable[Letter]
) -> Optional[dict[Process, frozenset[LocalState]]]:
    """Local states each process takes infinitely often along u v^ω.

    A process is sampled when it takes part in a letter; a process idle in
    the loop keeps its frozen state. Returns None when the run gets stuck."""
    u = automaton.alphabet.check_word(u)
    v = automaton.alphabet.check_word(v)
    if not v:
        raise AutomatonError("The loop of a lasso must be non-empty")
    if not automaton.is_deterministic:
        raise NotDeterministic("Lasso acceptance needs a deterministic automaton")

    state = automaton.run_word(u)
    if isinstance(state, Stuck):
        return None

    # Iterate v until the state at the start of a copy of v repeats.
    seen: dict[GlobalState, int] = {}
    starts: list[GlobalState] = []
    while state not in seen:
        seen[state] = len(starts)
        starts.append(state)
        for letter in v:
            successors = automaton.step(state, letter)
            if not successors:
                return None
            state = successors[0]

    recurring: dict[Process, set[LocalState]] = {
        p: set() for p in automaton.alphabet.process_order
    }
    active: set[Process] = set()
    current = state
    for _ in range(len(starts) - seen[state]):
        for letter in v:
            current = automaton.step(current, letter)[0]
            for process in automaton.participants(letter):
                active.add(process)
                recurring[process].add(automaton.local_state(current, process))

    for process in automaton.alphabet.process_order:
        if process not in active:
            recurring[process] = {automaton.local_state(state, process)}

    return {p: frozenset(s) for p, s in recurring.items()}


def accepts_lasso_async(
    automaton: AsyncAutomaton,
    condition: AcceptanceCondition,
    u: Iterable[Letter],
    v: Iterable[Letter],
) -> bool:
    recurring = recurring_local_states(automaton, u, v)
    if recurring is None:
        return False
    return condition.accepts(recurring)


def global_expansion(automaton: AsyncAutomaton) -> GlobalExpansion:
    return automaton.global_expansion()


def run_word(
    automaton: AsyncAutomaton, word: Iterable[Letter]
) -> Union[GlobalState, Stuck]:
    return automaton.run_word(word)


def is_deterministic(automaton: AsyncAutomaton) -> bool:
    return automaton.is_deterministic
