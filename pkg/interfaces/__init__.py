from typing import Iterator, Optional


class FormatError(Exception):
    def __init__(
        self, message: str, path: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        location = ""
        if path is not None:
            location = "{}:{}: ".format(path, line) if line else "{}: ".format(path)
        super().__init__(location + message)
        self.path = path
        self.line = line


def tokenized_lines(path: str) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, tokens), skipping blank lines and # comments."""
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if line:
                yield number, line.split()


def format_word(word) -> str:
    if not word:
        return "ε"
    if all(len(letter) == 1 for letter in word):
        return "".join(word)
    return ",".join(word)


def parse_word(text: str):
    text = text.strip()
    if text in ("", "ε"):
        return ()
    if "," in text:
        return tuple(token for token in text.split(",") if token)
    if " " in text:
        return tuple(text.split())
    return tuple(text)


def parse_lasso(text: str):
    if text.count("|") != 1:
        raise FormatError("Lasso must be written as u|v, got {!r}".format(text))
    u, v = text.split("|")
    return parse_word(u), parse_word(v)
