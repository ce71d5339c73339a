import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from automata import NotTraceClosed
from automata.omega import (
    BuchiAutomaton,
    Dfa,
    ResidualClass,
    State,
    dfa_forward_diamond,
    dfa_prefix_closed,
    dfa_trace_closed,
    forward_diamond_violation,
    is_safety,
)
from monitoring import MonitoringError
from traces import (
    DistributedAlphabet,
    Letter,
    NotPrime,
    Process,
    Trace,
    Word,
    prime_prefixes,
)

VIEW_FAMILY_CAP = int(os.environ.get("TRACE_MONITORS_VIEW_FAMILY_CAP", "64"))

ProcessSet = frozenset[Process]
# One tuple of subsets (indexed like the view family) per tracked language.
ViewMap = tuple[tuple[frozenset[State], ...], ...]


def view_family(alphabet: DistributedAlphabet) -> tuple[ProcessSet, ...]:
    """Union closure of the letter domains, smallest sets first."""
    family = {alphabet.dom[a] for a in alphabet.letters}
    frontier = list(family)
    while frontier:
        current = frontier.pop()
        for other in list(family):
            union = current | other
            if union not in family:
                if len(family) >= VIEW_FAMILY_CAP:
                    raise MonitoringError(
                        "View family exceeds {} process sets".format(VIEW_FAMILY_CAP)
                    )
                family.add(union)
                frontier.append(union)
    return tuple(sorted(family, key=lambda w: (len(w), sorted(w))))


class ViewMapAutomaton:
    """Deterministic sequential machine keeping, for every process set W of
    the view family, the Büchi subset reached on a linearization of the
    W-view of the trace read so far."""

    def __init__(
        self, alphabet: DistributedAlphabet, automata: Sequence[BuchiAutomaton]
    ) -> None:
        if not 1 <= len(automata) <= 2:
            raise MonitoringError("A view map tracks one or two languages")

        self.alphabet = alphabet
        self.automata = tuple(b.with_letters(alphabet.letters) for b in automata)
        self.family = view_family(alphabet)
        self.family_index = {w: i for i, w in enumerate(self.family)}
        self.updates = {
            a: tuple(
                (i, self.family_index[w | alphabet.dom[a]])
                for i, w in enumerate(self.family)
                if w & alphabet.dom[a]
            )
            for a in alphabet.letters
        }
        self.initial: ViewMap = tuple(
            tuple(frozenset({b.initial}) for _ in self.family) for b in self.automata
        )
        self._steps: dict[tuple[ViewMap, Letter], ViewMap] = {}

    def entry(self, state: ViewMap, letter: Letter, language: int = 0):
        return state[language][self.family_index[self.alphabet.domain(letter)]]

    def stepped_entry(
        self, state: ViewMap, letter: Letter, language: int = 0
    ) -> frozenset[State]:
        """Subset reached on the past of a new ``letter`` event."""
        return self.automata[language].post(
            self.entry(state, letter, language), letter
        )

    def step(self, state: ViewMap, letter: Letter) -> ViewMap:
        key = (state, letter)
        if key not in self._steps:
            updated = []
            for automaton, entries in zip(self.automata, state):
                entries = list(entries)
                fresh = list(entries)
                for target, source in self.updates[letter]:
                    fresh[target] = automaton.post(entries[source], letter)
                updated.append(tuple(fresh))
            self._steps[key] = tuple(updated)
        return self._steps[key]

    def run(self, word: Iterable[Letter]) -> ViewMap:
        state = self.initial
        for letter in self.alphabet.check_word(word):
            state = self.step(state, letter)
        return state


class ClosureRecognizer(ViewMapAutomaton):
    """Safety acceptor for the prime closure of L(B): a step on ``a`` is
    permitted while the past of the new event stays a prime prefix of L."""

    def __init__(self, alphabet: DistributedAlphabet, automaton: BuchiAutomaton):
        super().__init__(alphabet, [automaton])

    @property
    def automaton(self) -> BuchiAutomaton:
        return self.automata[0]

    def permits(self, state: ViewMap, letter: Letter) -> bool:
        subset = self.stepped_entry(state, letter)
        return self.automaton.residual_class(subset) is not ResidualClass.EMPTY

    def rejection_position(self, word: Iterable[Letter]) -> Optional[int]:
        state = self.initial
        for position, letter in enumerate(self.alphabet.check_word(word)):
            if not self.permits(state, letter):
                return position
            state = self.step(state, letter)
        return None

    def accepts(self, word: Iterable[Letter]) -> bool:
        return self.rejection_position(word) is None


def build_closure_recognizer(
    automaton: BuchiAutomaton, alphabet: DistributedAlphabet
) -> ClosureRecognizer:
    return ClosureRecognizer(alphabet, automaton)


def in_prime_set(automaton: BuchiAutomaton, prime: Trace) -> bool:
    if not prime.is_prime:
        raise NotPrime("{!r} is not a prime trace".format(prime))
    automaton = automaton.with_letters(prime.alphabet.letters)
    subset = automaton.subset_after(prime.normal_form)
    return automaton.residual_class(subset) is not ResidualClass.EMPTY


def failing_prime_prefix(automaton: BuchiAutomaton, trace: Trace) -> Optional[Trace]:
    """Smallest prime prefix of ``trace`` outside P(L), if any."""
    failing = [p for p in prime_prefixes(trace) if not in_prime_set(automaton, p)]
    if not failing:
        return None
    return min(failing, key=lambda p: (len(p), p.normal_form))


def in_closure(automaton: BuchiAutomaton, trace: Trace) -> bool:
    return failing_prime_prefix(automaton, trace) is None


@dataclass(frozen=True)
class LocalSafetyReport:
    prefix_closed: bool
    forward_diamond: bool
    omega_safety: Optional[bool]
    violation: Optional[tuple[Word, Letter, Letter]] = None

    @property
    def locally_safety(self) -> bool:
        return (
            self.prefix_closed
            and self.forward_diamond
            and self.omega_safety is not False
        )


def classify_locally_safety(
    dfa: Dfa,
    omega_part: Optional[BuchiAutomaton],
    alphabet: DistributedAlphabet,
) -> LocalSafetyReport:
    if not dfa_trace_closed(dfa, alphabet):
        raise NotTraceClosed("Finite-word language is not closed under swaps")

    return LocalSafetyReport(
        prefix_closed=dfa_prefix_closed(dfa),
        forward_diamond=dfa_forward_diamond(dfa, alphabet),
        omega_safety=is_safety(omega_part) if omega_part is not None else None,
        violation=forward_diamond_violation(dfa, alphabet),
    )
