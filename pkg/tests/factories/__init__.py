import itertools
import os
import random

from automata.asynchronous import AsyncAutomaton
from automata.omega import BuchiAutomaton, Nfa
from interfaces.alphabets import read_alphabet
from interfaces.asynchronous import read_async_automaton
from interfaces.automata import read_automaton
from traces import DistributedAlphabet

FIXTURES = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(__file__))), "fixtures"
)


def fixturePath(name: str) -> str:
    return os.path.join(FIXTURES, name)


def alphabetFactory(domains: dict) -> DistributedAlphabet:
    return DistributedAlphabet.from_domains(domains)


def consecutiveAlphabet() -> DistributedAlphabet:
    return read_alphabet(fixturePath("consecutive_c.alph"))


def exampleAlphabet() -> DistributedAlphabet:
    return read_alphabet(fixturePath("example.alph"))


def independentAlphabet() -> DistributedAlphabet:
    return read_alphabet(fixturePath("two_components.alph"))


def buchiFixture(name: str, alphabet: DistributedAlphabet = None) -> BuchiAutomaton:
    letters = alphabet.letters if alphabet is not None else None
    return read_automaton(fixturePath(name), BuchiAutomaton, letters=letters)


def exampleAutomaton() -> AsyncAutomaton:
    automaton, _ = read_async_automaton(fixturePath("example.aa"))
    return automaton


def buchiFactory(
    states, initial, accepting, transitions, letters=()
) -> BuchiAutomaton:
    transitions = frozenset(tuple(t) for t in transitions)
    letters = tuple(set(letters) | {a for _, a, _ in transitions})
    return BuchiAutomaton(
        tuple(states), initial, frozenset(accepting), transitions, letters
    )


def randomBuchi(rng: random.Random, letters, size: int = 3) -> BuchiAutomaton:
    states = ["q{}".format(i) for i in range(size)]
    transitions = [
        (q, a, r)
        for q in states
        for a in letters
        for r in states
        if rng.random() < 0.4
    ]
    accepting = [q for q in states if rng.random() < 0.5]
    return buchiFactory(states, states[0], accepting, transitions, letters)


def randomNfa(rng: random.Random, size: int, letters=("x", "y")) -> Nfa:
    states = tuple("n{}".format(i) for i in range(size))
    transitions = frozenset(
        (q, a, r)
        for q in states
        for a in letters
        for r in states
        if rng.random() < 0.4
    )
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return Nfa(states, states[0], accepting, transitions, tuple(letters))


def allNfas(size: int, letters=("x", "y")):
    """Every NFA with ``size`` states, initial state n0."""
    states = tuple("n{}".format(i) for i in range(size))
    triples = [(q, a, r) for q in states for a in letters for r in states]
    for mask in itertools.product((False, True), repeat=len(triples)):
        transitions = frozenset(t for t, keep in zip(triples, mask) if keep)
        for accepting in itertools.product((False, True), repeat=size):
            yield Nfa(
                states,
                states[0],
                frozenset(q for q, keep in zip(states, accepting) if keep),
                transitions,
                tuple(letters),
            )


def randomAsyncAutomaton(
    rng: random.Random, alphabet: DistributedAlphabet, states: int = 2
) -> AsyncAutomaton:
    """Deterministic asynchronous automaton; each local transition is
    defined with probability 0.7."""
    local_states = {
        p: tuple(str(i) for i in range(states)) for p in alphabet.process_order
    }
    transitions = {}
    for letter in alphabet.letters:
        participants = tuple(sorted(alphabet.dom[letter]))
        pairs = []
        for src in itertools.product(*(local_states[p] for p in participants)):
            if rng.random() < 0.7:
                dst = tuple(rng.choice(local_states[p]) for p in participants)
                pairs.append((src, dst))
        transitions[letter] = tuple(pairs)
    initial = {p: "0" for p in alphabet.process_order}
    return AsyncAutomaton(alphabet, local_states, initial, transitions)
