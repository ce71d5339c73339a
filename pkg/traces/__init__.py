import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence

Letter = str
Process = str
Word = tuple[Letter, ...]

# An event is identified by its label and its vector clock, which is the same
# in every trace that contains the event as a prefix member.
EventIdentity = tuple[Letter, tuple[int, ...]]


class TraceError(Exception):
    pass


class UnknownLetter(TraceError):
    def __init__(self, letter: Letter) -> None:
        super().__init__("Unknown letter {!r}".format(letter))
        self.letter = letter


class UnknownProcess(TraceError):
    def __init__(self, process: Process) -> None:
        super().__init__("Unknown process {!r}".format(process))
        self.process = process


class NotPrime(TraceError):
    pass


def as_word(letters: Iterable[Letter] | str) -> Word:
    """Accepts a tuple/list of letters or a string.

    Strings containing whitespace are split into tokens, other strings are
    read one character per letter.
    """
    if isinstance(letters, str):
        if any(character.isspace() for character in letters):
            return tuple(letters.split())
        return tuple(letters)
    return tuple(letters)


@dataclass(frozen=True)
class DistributedAlphabet:
    processes: frozenset[Process]
    dom: Mapping[Letter, frozenset[Process]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "processes", frozenset(self.processes))
        object.__setattr__(
            self, "dom", {a: frozenset(d) for a, d in sorted(self.dom.items())}
        )

        for letter, domain in self.dom.items():
            if not domain:
                raise TraceError("Letter {!r} has an empty domain".format(letter))
            if not domain <= self.processes:
                raise TraceError(
                    "Domain of {!r} uses undeclared processes {}".format(
                        letter, sorted(domain - self.processes)
                    )
                )

    def __hash__(self) -> int:
        return hash((self.processes, tuple(self.dom.items())))

    @classmethod
    def from_domains(
        cls, domains: Mapping[Letter, Iterable[Process]]
    ) -> "DistributedAlphabet":
        dom = {letter: frozenset(procs) for letter, procs in domains.items()}
        processes = frozenset(itertools.chain.from_iterable(dom.values()))
        return cls(processes, dom)

    @cached_property
    def letters(self) -> tuple[Letter, ...]:
        # The fixed total letter order used for normal forms.
        return tuple(sorted(self.dom))

    @cached_property
    def process_order(self) -> tuple[Process, ...]:
        return tuple(sorted(self.processes))

    @cached_property
    def process_index(self) -> dict[Process, int]:
        return {process: i for i, process in enumerate(self.process_order)}

    def domain(self, letter: Letter) -> frozenset[Process]:
        if letter not in self.dom:
            raise UnknownLetter(letter)
        return self.dom[letter]

    def check_word(self, word: Iterable[Letter]) -> Word:
        word = as_word(word)
        for letter in word:
            self.domain(letter)
        return word

    def independent(self, a: Letter, b: Letter) -> bool:
        return not (self.domain(a) & self.domain(b))

    @cached_property
    def independent_pairs(self) -> tuple[tuple[Letter, Letter], ...]:
        return tuple(
            (a, b)
            for a in self.letters
            for b in self.letters
            if a != b and self.independent(a, b)
        )

    def components(self) -> list[frozenset[Letter]]:
        """Finest partition of the letters with cross-part independence."""
        return letter_components(self, self.letters)

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def component_of(self, letter: Letter) -> frozenset[Letter]:
        for component in self.components():
            if letter in component:
                return component
        raise UnknownLetter(letter)


def letter_components(
    alphabet: DistributedAlphabet, letters: Iterable[Letter]
) -> list[frozenset[Letter]]:
    parent = {letter: letter for letter in letters}

    def find(letter: Letter) -> Letter:
        while parent[letter] != letter:
            parent[letter] = parent[parent[letter]]
            letter = parent[letter]
        return letter

    for a, b in itertools.combinations(sorted(parent), 2):
        if not alphabet.independent(a, b):
            parent[find(a)] = find(b)

    groups: dict[Letter, set[Letter]] = {}
    for letter in parent:
        groups.setdefault(find(letter), set()).add(letter)

    return sorted((frozenset(g) for g in groups.values()), key=lambda g: min(g))


def independent(alphabet: DistributedAlphabet, a: Letter, b: Letter) -> bool:
    return alphabet.independent(a, b)


def components(alphabet: DistributedAlphabet) -> list[frozenset[Letter]]:
    return alphabet.components()


def is_connected(alphabet: DistributedAlphabet) -> bool:
    return alphabet.is_connected()


@dataclass(frozen=True, eq=False)
class Trace:
    """A finite trace, stored as the word it was built from plus one vector
    clock per event. Event ``i`` is the ``i``-th letter of ``word``."""

    alphabet: DistributedAlphabet
    word: Word
    vclocks: tuple[tuple[int, ...], ...]
    preds: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.word)))

    def label(self, event: int) -> Letter:
        return self.word[event]

    def vclock(self, event: int) -> dict[Process, int]:
        return dict(zip(self.alphabet.process_order, self.vclocks[event]))

    def identity(self, event: int) -> EventIdentity:
        return (self.word[event], self.vclocks[event])

    @cached_property
    def identities(self) -> frozenset[EventIdentity]:
        return frozenset(self.identity(event) for event in self)

    def precedes(self, e: int, f: int) -> bool:
        """Causal order e ≤ f."""
        if e == f:
            return True
        index = self.alphabet.process_index
        process = min(self.alphabet.dom[self.word[e]])
        return self.vclocks[f][index[process]] >= self.vclocks[e][index[process]]

    @cached_property
    def normal_form(self) -> Word:
        emitted: set[int] = set()
        result = []
        remaining = set(self)
        while remaining:
            available = [e for e in remaining if self.preds[e] <= emitted]
            chosen = min(available, key=lambda e: (self.word[e], e))
            emitted.add(chosen)
            remaining.discard(chosen)
            result.append(self.word[chosen])
        return tuple(result)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.alphabet == other.alphabet and self.identities == other.identities

    def __hash__(self) -> int:
        return hash(self.normal_form)

    def __repr__(self) -> str:
        return "Trace([{}])".format(" ".join(self.normal_form))

    @cached_property
    def last_events(self) -> dict[Process, int]:
        last: dict[Process, int] = {}
        for event, letter in enumerate(self.word):
            for process in self.alphabet.dom[letter]:
                last[process] = event
        return last

    @cached_property
    def maximal_events(self) -> frozenset[int]:
        last = self.last_events
        return frozenset(
            event
            for event in self
            if all(last[p] == event for p in self.alphabet.dom[self.word[event]])
        )

    @property
    def is_prime(self) -> bool:
        return len(self.maximal_events) == 1

    def restrict(self, events: Iterable[int]) -> "Trace":
        """The sub-trace on a downward-closed set of events."""
        keep = set(events)
        return trace_of_word(
            self.alphabet, [self.word[e] for e in self if e in keep]
        )

    def past(self, event: int) -> "Trace":
        return self.restrict(f for f in self if self.precedes(f, event))

    def view(self, processes: Iterable[Process]) -> "Trace":
        processes = frozenset(processes)
        if not processes <= self.alphabet.processes:
            raise UnknownProcess(sorted(processes - self.alphabet.processes)[0])

        tops = [self.last_events[p] for p in processes if p in self.last_events]
        return self.restrict(
            f for f in self if any(self.precedes(f, top) for top in tops)
        )

    def extend(self, letters: Iterable[Letter]) -> "Trace":
        return trace_of_word(self.alphabet, self.word + as_word(letters))

    def is_prefix_of(self, other: "Trace") -> bool:
        return self.identities <= other.identities


def trace_of_word(alphabet: DistributedAlphabet, word: Iterable[Letter]) -> Trace:
    word = alphabet.check_word(word)
    index = alphabet.process_index
    width = len(alphabet.process_order)

    last: dict[Process, int] = {}
    vclocks: list[tuple[int, ...]] = []
    preds: list[frozenset[int]] = []

    for event, letter in enumerate(word):
        domain = alphabet.dom[letter]
        candidates = {last[p] for p in domain if p in last}

        clock = [0] * width
        for candidate in candidates:
            clock = [max(x, y) for x, y in zip(clock, vclocks[candidate])]
        for process in domain:
            clock[index[process]] += 1

        # Immediate predecessors are the last events on dom(letter) that are
        # not below another such last event.
        immediate = frozenset(
            c
            for c in candidates
            if not any(
                c != d and _clock_below(alphabet, word, vclocks, c, d)
                for d in candidates
            )
        )

        vclocks.append(tuple(clock))
        preds.append(immediate)
        for process in domain:
            last[process] = event

    return Trace(alphabet, word, tuple(vclocks), tuple(preds))


def _clock_below(
    alphabet: DistributedAlphabet,
    word: Sequence[Letter],
    vclocks: Sequence[tuple[int, ...]],
    e: int,
    f: int,
) -> bool:
    position = alphabet.process_index[min(alphabet.dom[word[e]])]
    return vclocks[f][position] >= vclocks[e][position]


def empty_trace(alphabet: DistributedAlphabet) -> Trace:
    return trace_of_word(alphabet, ())


def normal_form(alphabet: DistributedAlphabet, word: Iterable[Letter]) -> Word:
    return trace_of_word(alphabet, word).normal_form


def equivalent(
    alphabet: DistributedAlphabet, u: Iterable[Letter], v: Iterable[Letter]
) -> bool:
    return normal_form(alphabet, u) == normal_form(alphabet, v)


def join(traces: Iterable[Trace]) -> Optional[Trace]:
    """Least upper bound under the prefix order, or None when incoherent."""
    traces = list(traces)
    if not traces:
        return None

    alphabet = traces[0].alphabet
    index = alphabet.process_index
    events: set[EventIdentity] = set()
    for trace in traces:
        if trace.alphabet != alphabet:
            raise TraceError("Cannot join traces over different alphabets")
        events |= trace.identities

    # Two different events claiming the same slot on a process are a conflict.
    slots: dict[tuple[Process, int], EventIdentity] = {}
    for letter, clock in events:
        for process in alphabet.dom[letter]:
            slot = (process, clock[index[process]])
            if slots.setdefault(slot, (letter, clock)) != (letter, clock):
                return None

    ordered = sorted(events, key=lambda event: (sum(event[1]), event))
    candidate = trace_of_word(alphabet, [letter for letter, _ in ordered])
    if candidate.identities != events:
        return None

    return candidate


def max_and_prime(trace: Trace) -> tuple[frozenset[int], bool]:
    return trace.maximal_events, trace.is_prime


def prime_prefixes(trace: Trace) -> set[Trace]:
    return {trace.past(event) for event in trace}


def view(trace: Trace, processes: Iterable[Process]) -> Trace:
    return trace.view(processes)


def enumerate_traces(
    alphabet: DistributedAlphabet,
    max_events: int,
    letters: Optional[Iterable[Letter]] = None,
) -> list[Trace]:
    """All distinct traces with at most ``max_events`` events, shortest first."""
    letters = tuple(sorted(letters)) if letters is not None else alphabet.letters
    seen = {(): empty_trace(alphabet)}
    frontier = deque([empty_trace(alphabet)])
    result = [empty_trace(alphabet)]

    while frontier:
        trace = frontier.popleft()
        if len(trace) >= max_events:
            continue
        for letter in letters:
            extended = trace.extend((letter,))
            if extended.normal_form not in seen:
                seen[extended.normal_form] = extended
                frontier.append(extended)
                result.append(extended)

    return result


def enumerate_primes(
    alphabet: DistributedAlphabet,
    max_events: int,
    letters: Optional[Iterable[Letter]] = None,
) -> list[Trace]:
    return [t for t in enumerate_traces(alphabet, max_events, letters) if t.is_prime]


@dataclass(frozen=True)
class PrimalityTracker:
    """Finite abstraction of max(t): which processes last saw which letter."""

    blocks: frozenset[tuple[Letter, frozenset[Process]]] = field(
        default_factory=frozenset
    )

    def step(
        self, alphabet: DistributedAlphabet, letter: Letter
    ) -> "PrimalityTracker":
        domain = alphabet.domain(letter)
        blocks = set()
        for owner, block in self.blocks:
            remaining = block - domain
            if remaining:
                blocks.add((owner, remaining))
        blocks.add((letter, domain))
        return PrimalityTracker(frozenset(blocks))

    def full_blocks(
        self, alphabet: DistributedAlphabet
    ) -> list[tuple[Letter, frozenset[Process]]]:
        return sorted(
            (owner, block)
            for owner, block in self.blocks
            if block == alphabet.dom[owner]
        )

    def maximal_letters(self, alphabet: DistributedAlphabet) -> list[Letter]:
        return [owner for owner, _ in self.full_blocks(alphabet)]

    def status(self, alphabet: DistributedAlphabet) -> tuple[bool, Optional[Letter]]:
        full = self.full_blocks(alphabet)
        if len(full) == 1:
            return True, full[0][0]
        return False, None


def tracker_step(
    alphabet: DistributedAlphabet, tracker: PrimalityTracker, letter: Letter
) -> PrimalityTracker:
    return tracker.step(alphabet, letter)


def tracker_status(
    alphabet: DistributedAlphabet, tracker: PrimalityTracker
) -> tuple[bool, Optional[Letter]]:
    return tracker.status(alphabet)


def tracker_of_word(
    alphabet: DistributedAlphabet, word: Iterable[Letter]
) -> PrimalityTracker:
    tracker = PrimalityTracker()
    for letter in alphabet.check_word(word):
        tracker = tracker.step(alphabet, letter)
    return tracker
