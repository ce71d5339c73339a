from typing import Iterable, Optional

from interfaces import FormatError, tokenized_lines
from traces import DistributedAlphabet, TraceError


def alphabet_from_lines(
    lines: Iterable[tuple[int, list[str]]], path: Optional[str] = None
) -> Optional[DistributedAlphabet]:
    """Collect ``processes`` and ``action`` lines; other keywords are ignored
    so the same lines may sit inside automaton files."""
    processes = None
    domains: dict[str, list[str]] = {}

    for number, tokens in lines:
        keyword = tokens[0]
        if keyword == "processes":
            if processes is not None:
                raise FormatError("Duplicate processes declaration", path, number)
            if len(set(tokens[1:])) != len(tokens) - 1:
                raise FormatError("Duplicate process name", path, number)
            processes = tokens[1:]
        elif keyword == "action":
            if len(tokens) < 3:
                raise FormatError("Expected: action <letter> <proc>...", path, number)
            letter = tokens[1]
            if letter in domains:
                raise FormatError(
                    "Duplicate action {!r}".format(letter), path, number
                )
            domains[letter] = tokens[2:]

    if processes is None and not domains:
        return None
    if processes is None:
        raise FormatError("Missing processes declaration", path)

    try:
        return DistributedAlphabet(frozenset(processes), domains)
    except TraceError as error:
        raise FormatError(str(error), path) from error


def read_alphabet(path: str) -> DistributedAlphabet:
    lines = list(tokenized_lines(path))
    for number, tokens in lines:
        if tokens[0] not in ("processes", "action"):
            raise FormatError(
                "Unknown keyword {!r}".format(tokens[0]), path, number
            )
    alphabet = alphabet_from_lines(lines, path)
    if alphabet is None:
        raise FormatError("Empty alphabet file", path)
    return alphabet


def alphabet_lines(alphabet: DistributedAlphabet) -> list[str]:
    lines = ["processes " + " ".join(alphabet.process_order)]
    for letter in alphabet.letters:
        lines.append(
            "action {} {}".format(letter, " ".join(sorted(alphabet.dom[letter])))
        )
    return lines


def write_alphabet(alphabet: DistributedAlphabet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(alphabet_lines(alphabet)) + "\n")
