import re

from interfaces import FormatError, tokenized_lines
from interfaces.alphabets import alphabet_from_lines, alphabet_lines
from interfaces.reports import render
from monitoring.synthesis import Verdict, VerdictTable

ENTRY_PATTERN = re.compile(r"^(W|L|C)=\{([^}]*)\}$")
SET_PATTERN = re.compile(r"^\{([^}]*)\}$")
VERDICTS = {verdict.value: verdict for verdict in Verdict}


def _members(text: str) -> frozenset[str]:
    return frozenset(part for part in text.split(",") if part)


def _braced(members) -> str:
    return "{" + ",".join(sorted(str(m) for m in members)) + "}"


def _verdict(token: str, path: str, number: int) -> Verdict:
    if not token.startswith("verdict=") or token[8:] not in VERDICTS:
        raise FormatError(
            "Expected verdict=none|top|bot, got {!r}".format(token), path, number
        )
    return VERDICTS[token[8:]]


def read_monitor(path: str) -> VerdictTable:
    lines = list(tokenized_lines(path))
    alphabet = alphabet_from_lines(lines, path)
    if alphabet is None:
        raise FormatError("Monitor file carries no alphabet", path)

    family = None
    initial = 0
    entries: dict[int, list] = {}
    transitions = {}

    for number, tokens in lines:
        keyword, arguments = tokens[0], tokens[1:]
        if keyword in ("processes", "action"):
            continue
        try:
            if keyword == "family":
                family = []
                for token in arguments:
                    match = SET_PATTERN.match(token)
                    if match is None:
                        raise FormatError(
                            "Bad process set {!r}".format(token), path, number
                        )
                    family.append(_members(match.group(1)))
            elif keyword == "initial":
                initial = int(arguments[0])
            elif keyword == "state":
                if len(arguments) != 5 or arguments[1] != "entry":
                    raise FormatError(
                        "Expected: state <id> entry W={..} L={..} C={..}", path, number
                    )
                parts = {}
                for token in arguments[2:]:
                    match = ENTRY_PATTERN.match(token)
                    if match is None:
                        raise FormatError(
                            "Bad entry field {!r}".format(token), path, number
                        )
                    parts[match.group(1)] = _members(match.group(2))
                entries.setdefault(int(arguments[0]), []).append(
                    (parts["W"], parts["L"], parts["C"])
                )
            elif keyword == "trans":
                if len(arguments) != 4:
                    raise FormatError(
                        "Expected: trans <id> <letter> <id'> verdict=..", path, number
                    )
                transitions[(int(arguments[0]), arguments[1])] = (
                    int(arguments[2]),
                    _verdict(arguments[3], path, number),
                )
            else:
                raise FormatError(
                    "Unknown keyword {!r}".format(keyword), path, number
                )
        except (KeyError, ValueError, IndexError) as error:
            raise FormatError("Malformed line", path, number) from error

    if family is None:
        raise FormatError("Missing family line", path)
    for target, _ in transitions.values():
        if target not in entries:
            raise FormatError("Transition to undeclared state {}".format(target), path)

    return VerdictTable(
        alphabet=alphabet,
        family=tuple(family),
        initial=initial,
        entries={k: tuple(v) for k, v in entries.items()},
        transitions=transitions,
    )


def monitor_text(table: VerdictTable) -> str:
    states = [
        {
            "id": state,
            "entries": [
                (_braced(w), _braced(ls), _braced(cs)) for w, ls, cs in entries
            ],
        }
        for state, entries in sorted(table.entries.items())
    ]
    transitions = [
        (state, letter, target, verdict.value)
        for (state, letter), (target, verdict) in sorted(table.transitions.items())
    ]
    return render(
        "monitor.va.j2",
        alphabet=alphabet_lines(table.alphabet),
        family=" ".join(_braced(w) for w in table.family),
        initial=table.initial,
        states=states,
        transitions=transitions,
    )


def write_monitor(table: VerdictTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(monitor_text(table))
