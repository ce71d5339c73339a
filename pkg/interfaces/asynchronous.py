import re
from typing import Optional

from automata import AutomatonError
from automata.asynchronous import AcceptanceCondition, AcceptanceKind, AsyncAutomaton
from interfaces import FormatError, tokenized_lines
from interfaces.alphabets import alphabet_from_lines, alphabet_lines
from traces import DistributedAlphabet, TraceError

SET_PATTERN = re.compile(r"^([^:]+):\{([^}]*)\}$")
ACCEPTANCE_KEYWORDS = {
    "buchi": AcceptanceKind.BUCHI,
    "muller": AcceptanceKind.MULLER,
    "generalized": AcceptanceKind.GENERALIZED_BUCHI,
}


def _assignments(text: str, path: str, number: int) -> dict[str, str]:
    result = {}
    for part in text.split(","):
        if "=" not in part:
            raise FormatError(
                "Expected process=state, got {!r}".format(part), path, number
            )
        process, state = part.split("=", 1)
        if process in result:
            raise FormatError(
                "Process {!r} assigned twice".format(process), path, number
            )
        result[process] = state
    return result


def _set_assignments(tokens: list[str], path: str, number: int) -> dict[str, frozenset]:
    result = {}
    for token in tokens:
        match = SET_PATTERN.match(token)
        if match is None:
            raise FormatError(
                "Expected process:{{states}}, got {!r}".format(token), path, number
            )
        process, states = match.groups()
        if process in result:
            raise FormatError(
                "Process {!r} assigned twice".format(process), path, number
            )
        result[process] = frozenset(s for s in states.split(",") if s)
    return result


def read_async_automaton(
    path: str, alphabet: Optional[DistributedAlphabet] = None
) -> tuple[AsyncAutomaton, Optional[AcceptanceCondition]]:
    """Read an asynchronous automaton and its optional acceptance block.

    Without an explicit ``alphabet`` the file's own ``processes``/``action``
    lines are used, falling back to the participants of each transition."""
    lines = list(tokenized_lines(path))
    if alphabet is None:
        alphabet = alphabet_from_lines(lines, path)

    local_states: dict[str, list[str]] = {}
    initial: Optional[dict[str, str]] = None
    transitions: dict[str, list] = {}
    participants: dict[str, tuple[str, ...]] = {}
    gamma: Optional[list[str]] = None
    kind: Optional[AcceptanceKind] = None
    targets: list[dict] = []

    def set_kind(new_kind: AcceptanceKind, number: int) -> None:
        nonlocal kind
        if kind is not None and kind is not new_kind:
            raise FormatError("Mixed acceptance kinds", path, number)
        kind = new_kind

    for number, tokens in lines:
        keyword, arguments = tokens[0], tokens[1:]
        if keyword in ("processes", "action"):
            continue
        if keyword == "process":
            if len(arguments) < 3 or arguments[1] != "states":
                raise FormatError("Expected: process <p> states <s>...", path, number)
            if arguments[0] in local_states:
                raise FormatError(
                    "Duplicate process {!r}".format(arguments[0]), path, number
                )
            local_states[arguments[0]] = arguments[2:]
        elif keyword == "init":
            if initial is not None:
                raise FormatError("Duplicate init line", path, number)
            initial = {}
            for token in arguments:
                initial.update(_assignments(token, path, number))
        elif keyword == "trans":
            if len(arguments) != 4 or arguments[2] != "->":
                raise FormatError(
                    "Expected: trans <a> p=s,... -> p=s,...", path, number
                )
            letter = arguments[0]
            before = _assignments(arguments[1], path, number)
            after = _assignments(arguments[3], path, number)
            if list(before) != sorted(before) or list(after) != list(before):
                raise FormatError(
                    "Participants must be listed in sorted order on both sides",
                    path,
                    number,
                )
            order = tuple(before)
            if participants.setdefault(letter, order) != order:
                raise FormatError(
                    "Inconsistent participants for {!r}".format(letter), path, number
                )
            transitions.setdefault(letter, []).append(
                (tuple(before.values()), tuple(after[p] for p in order))
            )
        elif keyword == "gamma":
            if gamma is not None or not arguments:
                raise FormatError(
                    "Expected a single non-empty gamma line", path, number
                )
            gamma = arguments
        elif keyword == "acceptance":
            if len(arguments) != 1 or arguments[0] not in ACCEPTANCE_KEYWORDS:
                raise FormatError(
                    "Expected: acceptance buchi|muller|generalized", path, number
                )
            set_kind(ACCEPTANCE_KEYWORDS[arguments[0]], number)
        elif keyword == "buchi":
            set_kind(AcceptanceKind.BUCHI, number)
            target = {}
            for token in arguments:
                target.update(_assignments(token, path, number))
            targets.append(target)
        elif keyword in ("muller", "generalized"):
            set_kind(ACCEPTANCE_KEYWORDS[keyword], number)
            targets.append(_set_assignments(arguments, path, number))
        else:
            raise FormatError("Unknown keyword {!r}".format(keyword), path, number)

    if initial is None:
        raise FormatError("Missing init line", path)

    try:
        if alphabet is None:
            alphabet = DistributedAlphabet(frozenset(local_states), participants)
        else:
            for letter, order in participants.items():
                expected = tuple(sorted(alphabet.dom.get(letter, ())))
                if letter in alphabet.dom and order != expected:
                    raise FormatError(
                        "Participants of {!r} do not match its domain".format(letter),
                        path,
                    )
        automaton = AsyncAutomaton(alphabet, local_states, initial, transitions)
        condition = None
        if kind is not None or gamma is not None:
            if gamma is None:
                raise FormatError("Acceptance block needs a gamma line", path)
            condition = AcceptanceCondition(
                kind or AcceptanceKind.BUCHI,
                tuple(gamma),
                tuple(tuple(t.items()) for t in targets),
            )
            condition.validate(automaton)
    except (AutomatonError, TraceError) as error:
        raise FormatError(str(error), path) from error

    return automaton, condition


def _state_list(states) -> str:
    return ",".join(sorted(states))


def async_automaton_lines(
    automaton: AsyncAutomaton, condition: Optional[AcceptanceCondition] = None
) -> list[str]:
    lines = alphabet_lines(automaton.alphabet)
    for process, states in automaton.local_states.items():
        lines.append("process {} states {}".format(process, " ".join(states)))
    lines.append(
        "init "
        + " ".join("{}={}".format(p, s) for p, s in automaton.initial.items())
    )
    for letter, pairs in automaton.transitions.items():
        participants = automaton.participants(letter)
        for src, dst in pairs:
            lines.append(
                "trans {} {} -> {}".format(
                    letter,
                    ",".join("{}={}".format(p, s) for p, s in zip(participants, src)),
                    ",".join("{}={}".format(p, s) for p, s in zip(participants, dst)),
                )
            )

    if condition is not None:
        lines.append("gamma " + " ".join(condition.gamma))
        lines.append("acceptance " + condition.kind.value)
        for target in condition.targets:
            if condition.kind is AcceptanceKind.BUCHI:
                lines.append(
                    "buchi " + ",".join("{}={}".format(p, s) for p, s in target)
                )
            else:
                lines.append(
                    "{} {}".format(
                        condition.kind.value,
                        " ".join(
                            "{}:{{{}}}".format(p, _state_list(s)) for p, s in target
                        ),
                    )
                )
    return lines


def write_async_automaton(
    automaton: AsyncAutomaton,
    path: str,
    condition: Optional[AcceptanceCondition] = None,
) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(async_automaton_lines(automaton, condition)) + "\n")
