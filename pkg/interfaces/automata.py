from typing import Optional, Type, TypeVar

from automata import AutomatonError
from automata.omega import BuchiAutomaton, Dfa, Nfa
from interfaces import FormatError, tokenized_lines

AutomatonT = TypeVar("AutomatonT", BuchiAutomaton, Nfa, Dfa)


def read_automaton(
    path: str, kind: Type[AutomatonT] = BuchiAutomaton, letters=None
) -> AutomatonT:
    """Read ``states``/``initial``/``accepting``/``trans`` lines. An optional
    ``letters`` line (or the ``letters`` argument) widens the alphabet beyond
    the letters used on transitions."""
    states: Optional[list[str]] = None
    initial: Optional[str] = None
    accepting: list[str] = []
    declared_letters = set(letters or ())
    transitions = set()

    for number, tokens in tokenized_lines(path):
        keyword, arguments = tokens[0], tokens[1:]
        if keyword == "states":
            if states is not None:
                raise FormatError("Duplicate states declaration", path, number)
            states = arguments
        elif keyword == "initial":
            if initial is not None or len(arguments) != 1:
                raise FormatError("Expected a single initial state", path, number)
            initial = arguments[0]
        elif keyword == "accepting":
            accepting.extend(arguments)
        elif keyword == "letters":
            declared_letters.update(arguments)
        elif keyword == "trans":
            if len(arguments) != 3:
                raise FormatError("Expected: trans <q> <letter> <q'>", path, number)
            transitions.add(tuple(arguments))
            declared_letters.add(arguments[1])
        else:
            raise FormatError("Unknown keyword {!r}".format(keyword), path, number)

    if states is None or initial is None:
        raise FormatError("Automaton needs states and an initial state", path)

    try:
        return kind(
            tuple(states),
            initial,
            frozenset(accepting),
            frozenset(transitions),
            tuple(declared_letters),
        )
    except AutomatonError as error:
        raise FormatError(str(error), path) from error


def automaton_lines(automaton) -> list[str]:
    lines = [
        "states " + " ".join(str(q) for q in automaton.states),
        "initial {}".format(automaton.initial),
        "accepting "
        + " ".join(str(q) for q in automaton.states if q in automaton.accepting),
        "letters " + " ".join(automaton.letters),
    ]
    order = {q: i for i, q in enumerate(automaton.states)}
    for source, letter, target in sorted(
        automaton.transitions, key=lambda t: (order[t[0]], t[1], order[t[2]])
    ):
        lines.append("trans {} {} {}".format(source, letter, target))
    return lines


def write_automaton(automaton, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(automaton_lines(automaton)) + "\n")
