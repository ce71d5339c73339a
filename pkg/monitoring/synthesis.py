import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from automata import NotTraceClosed, explore_labelled
from automata.omega import (
    LASSO_BOUND,
    BuchiAutomaton,
    ResidualClass,
    State,
    complement,
    intersection_is_empty,
    prefix_swap_closed,
    swap_closed_check,
    validate_trace_closed,
)
from monitoring import SynthesisError
from monitoring.closure import ProcessSet, ViewMap, ViewMapAutomaton
from traces import DistributedAlphabet, Letter, Word


class Verdict(Enum):
    NONE = "none"
    TOP = "top"
    BOT = "bot"

    @property
    def is_final(self) -> bool:
        return self is not Verdict.NONE


class VerdictAutomaton(ViewMapAutomaton):
    """View map over L and its complement. A step whose new event has a past
    with no extension in L emits BOT, one with no extension outside L emits
    TOP. Every event is judged on its own past, so a verdict carries over
    exactly to the events that causally follow it."""

    def __init__(
        self,
        alphabet: DistributedAlphabet,
        automaton: BuchiAutomaton,
        coautomaton: BuchiAutomaton,
    ) -> None:
        super().__init__(alphabet, [automaton, coautomaton])

    @property
    def automaton(self) -> BuchiAutomaton:
        return self.automata[0]

    @property
    def coautomaton(self) -> BuchiAutomaton:
        return self.automata[1]

    def transition(self, state: ViewMap, letter: Letter) -> tuple[ViewMap, Verdict]:
        violates = (
            self.automaton.residual_class(self.stepped_entry(state, letter, 0))
            is ResidualClass.EMPTY
        )
        satisfies = (
            self.coautomaton.residual_class(self.stepped_entry(state, letter, 1))
            is ResidualClass.EMPTY
        )
        if violates and satisfies:
            raise SynthesisError(
                "Past of {!r} has no extension in L nor in its complement".format(
                    letter
                )
            )
        if violates:
            verdict = Verdict.BOT
        elif satisfies:
            verdict = Verdict.TOP
        else:
            verdict = Verdict.NONE
        return self.step(state, letter), verdict

    def verdicts(self, word: Iterable[Letter]) -> list[Verdict]:
        state = self.initial
        result = []
        for letter in self.alphabet.check_word(word):
            state, verdict = self.transition(state, letter)
            result.append(verdict)
        return result

    def materialize(self) -> "VerdictTable":
        """Reachable transition table with states numbered in BFS order."""
        letters = self.alphabet.letters
        graph = explore_labelled(
            [self.initial],
            lambda state: [(letter, self.step(state, letter)) for letter in letters],
        )
        ids = {state: number for number, state in enumerate(graph)}

        table = {}
        for state in graph:
            for letter in letters:
                target, verdict = self.transition(state, letter)
                table[(ids[state], letter)] = (ids[target], verdict)

        entries = {
            ids[state]: tuple(
                (w, state[0][i], state[1][i]) for i, w in enumerate(self.family)
            )
            for state in graph
        }
        return VerdictTable(
            alphabet=self.alphabet,
            family=self.family,
            initial=0,
            entries=entries,
            transitions=table,
        )


Entry = tuple[ProcessSet, frozenset[State], frozenset[State]]


@dataclass(frozen=True, eq=False)
class VerdictTable:
    """Materialised verdict machine, as stored in monitor files."""

    alphabet: DistributedAlphabet
    family: tuple[ProcessSet, ...]
    initial: int
    entries: dict[int, tuple[Entry, ...]]
    transitions: dict[tuple[int, Letter], tuple[int, Verdict]] = field(
        default_factory=dict
    )

    def __len__(self) -> int:
        return len(self.entries)

    def verdicts(self, word: Iterable[Letter]) -> list[Verdict]:
        state = self.initial
        result = []
        for letter in self.alphabet.check_word(word):
            if (state, letter) not in self.transitions:
                raise SynthesisError(
                    "Monitor has no transition from {} on {!r}".format(state, letter)
                )
            state, verdict = self.transitions[(state, letter)]
            result.append(verdict)
        return result


Monitor = Union[VerdictAutomaton, VerdictTable]


def verdict_on_prefix(monitor: Monitor, word: Iterable[Letter]) -> list[Verdict]:
    return monitor.verdicts(word)


def final_verdict(monitor: Monitor, word: Iterable[Letter]) -> Verdict:
    verdicts = monitor.verdicts(word)
    return verdicts[-1] if verdicts else Verdict.NONE


def _words(letters: Iterable[Letter], length: int) -> Iterable[Word]:
    letters = tuple(letters)
    for size in range(length + 1):
        yield from itertools.product(letters, repeat=size)


def validate_complement_pair(
    automaton: BuchiAutomaton,
    coautomaton: BuchiAutomaton,
    alphabet: DistributedAlphabet,
) -> None:
    if not intersection_is_empty(automaton, coautomaton):
        raise SynthesisError("L and its claimed complement overlap")

    for u in _words(alphabet.letters, LASSO_BOUND):
        for v in _words(alphabet.letters, LASSO_BOUND):
            if v and not (
                automaton.accepts_lasso(u, v) or coautomaton.accepts_lasso(u, v)
            ):
                raise SynthesisError(
                    "Lasso {}|{} is in neither L nor its claimed complement".format(
                        " ".join(u), " ".join(v)
                    )
                )

    try:
        validate_trace_closed(automaton, alphabet, complemented=coautomaton)
        if not prefix_swap_closed(coautomaton, alphabet):
            raise NotTraceClosed("Complement prefix language is not swap closed")
        if not swap_closed_check(coautomaton, alphabet, complemented=automaton):
            raise NotTraceClosed("Complement language is not swap closed")
    except NotTraceClosed as error:
        raise SynthesisError(str(error)) from error


def synthesize_monitor(
    automaton: BuchiAutomaton,
    coautomaton: Optional[BuchiAutomaton],
    alphabet: DistributedAlphabet,
    validate: bool = True,
) -> VerdictAutomaton:
    """Verdict machine for L(automaton); the complement is computed when
    ``coautomaton`` is None."""
    unknown = (set(automaton.letters) | set(getattr(coautomaton, "letters", ()))) - set(
        alphabet.letters
    )
    if unknown:
        raise SynthesisError(
            "Automaton letters {} are not in the alphabet".format(sorted(unknown))
        )

    automaton = automaton.with_letters(alphabet.letters)
    if coautomaton is None:
        coautomaton = complement(automaton)
    coautomaton = coautomaton.with_letters(alphabet.letters)

    if validate:
        validate_complement_pair(automaton, coautomaton, alphabet)

    return VerdictAutomaton(alphabet, automaton, coautomaton)
