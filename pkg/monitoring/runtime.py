import os
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from automata.asynchronous import AsyncAutomaton, GlobalState
from monitoring import DisabledLetter, MonitoringError
from monitoring.synthesis import Monitor, Verdict
from traces import Letter, Process, Word, normal_form

STEP_CAP = int(os.environ.get("TRACE_MONITORS_STEP_CAP", "100000"))

EventId = tuple[tuple[Process, int], ...]


@dataclass(frozen=True)
class ProcessView:
    """What ``owner`` knows of the run: a causally closed event log."""

    owner: Process
    log: tuple[tuple[EventId, Letter], ...] = ()
    vclock: tuple[tuple[Process, int], ...] = ()

    @property
    def event_ids(self) -> frozenset[EventId]:
        return frozenset(event for event, _ in self.log)

    def clock(self, process: Process) -> int:
        return dict(self.vclock).get(process, 0)

    def word(self) -> Word:
        return tuple(letter for _, letter in self.log)


def merge_views(owner: Process, views: Iterable[ProcessView]) -> ProcessView:
    log: list[tuple[EventId, Letter]] = []
    seen: set[EventId] = set()
    clock: dict[Process, int] = {}
    for view in views:
        for event, letter in view.log:
            if event not in seen:
                seen.add(event)
                log.append((event, letter))
        for process, count in view.vclock:
            clock[process] = max(clock.get(process, 0), count)
    return ProcessView(owner, tuple(log), tuple(sorted(clock.items())))


class Schedule:
    def next_letter(
        self, system: AsyncAutomaton, state: GlobalState, position: int
    ) -> Optional[Letter]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


class ScriptedSchedule(Schedule):
    def __init__(self, word: Iterable[Letter]) -> None:
        self.word = tuple(word)

    def next_letter(self, system, state, position):
        if position >= len(self.word):
            return None
        letter = self.word[position]
        if not system.step(state, letter):
            raise DisabledLetter(letter, position)
        return letter

    def describe(self) -> str:
        return "script {}".format(" ".join(self.word))


class RandomSchedule(Schedule):
    """Uniform choice among the enabled letters, reproducible per seed."""

    def __init__(self, seed: int) -> None:
        self.seed = seed
        self.random = random.Random(seed)

    def next_letter(self, system, state, position):
        enabled = system.enabled(state)
        if not enabled:
            return None
        return self.random.choice(enabled)

    def describe(self) -> str:
        return "random seed={}".format(self.seed)


def random_schedule(seed: int, steps: int) -> RandomSchedule:
    if steps > STEP_CAP:
        raise MonitoringError("At most {} steps are allowed".format(STEP_CAP))
    return RandomSchedule(seed)


@dataclass(frozen=True)
class EventRecord:
    index: int
    letter: Letter
    participants: tuple[Process, ...]
    vclock: tuple[tuple[Process, int], ...]
    verdict: Verdict


@dataclass(frozen=True)
class RunReport:
    events: tuple[EventRecord, ...]
    verdicts: tuple[tuple[Process, Verdict], ...]
    decided_at: tuple[tuple[Process, int], ...]
    final_state: GlobalState
    seed: int
    schedule: str
    deadlocked: bool = False
    monitored: bool = False

    @property
    def word(self) -> Word:
        return tuple(event.letter for event in self.events)

    def verdict_of(self, process: Process) -> Verdict:
        return dict(self.verdicts)[process]


def simulate(
    system: AsyncAutomaton,
    monitor: Optional[Monitor],
    schedule: Schedule,
    seed: int,
    steps: int,
) -> RunReport:
    if steps > STEP_CAP:
        raise MonitoringError("At most {} steps are allowed".format(STEP_CAP))
    if steps < 0:
        raise MonitoringError("Step count must not be negative")

    alphabet = system.alphabet
    processes = alphabet.process_order
    choices = random.Random(seed)

    state = system.initial_state
    views = {p: ProcessView(p) for p in processes}
    verdicts = {p: Verdict.NONE for p in processes}
    decided_at: dict[Process, int] = {}
    memo: dict[frozenset[EventId], Verdict] = {}
    events: list[EventRecord] = []
    deadlocked = False

    for position in range(steps):
        letter = schedule.next_letter(system, state, position)
        if letter is None:
            deadlocked = not system.enabled(state)
            break

        successors = system.step(state, letter)
        state = successors[0] if len(successors) == 1 else choices.choice(successors)

        participants = tuple(sorted(alphabet.dom[letter]))
        merged = merge_views(participants[0], (views[p] for p in participants))
        clock = dict(merged.vclock)
        for process in participants:
            clock[process] = clock.get(process, 0) + 1
        event_id = tuple((p, clock[p]) for p in participants)
        past = merged.log + ((event_id, letter),)
        vclock = tuple(sorted(clock.items()))

        for process in participants:
            views[process] = ProcessView(process, past, vclock)

        verdict = Verdict.NONE
        if monitor is not None:
            key = frozenset(event for event, _ in past)
            if key not in memo:
                word = normal_form(alphabet, [a for _, a in past])
                memo[key] = monitor.verdicts(word)[-1]
            verdict = memo[key]

        for process in participants:
            if verdicts[process] is Verdict.NONE and verdict.is_final:
                verdicts[process] = verdict
                decided_at[process] = position + 1

        events.append(
            EventRecord(
                index=position + 1,
                letter=letter,
                participants=participants,
                vclock=tuple((p, clock.get(p, 0)) for p in processes),
                verdict=verdict,
            )
        )

    return RunReport(
        events=tuple(events),
        verdicts=tuple((p, verdicts[p]) for p in processes),
        decided_at=tuple(sorted(decided_at.items())),
        final_state=state,
        seed=seed,
        schedule=schedule.describe(),
        deadlocked=deadlocked,
        monitored=monitor is not None,
    )
