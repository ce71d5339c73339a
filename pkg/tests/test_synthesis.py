import itertools
import unittest

from factories import (
    buchiFactory,
    buchiFixture,
    consecutiveAlphabet,
    independentAlphabet,
)

from automata.omega import complement
from monitoring import SynthesisError
from monitoring.closure import build_closure_recognizer
from monitoring.synthesis import (
    Verdict,
    final_verdict,
    synthesize_monitor,
    verdict_on_prefix,
)
from traces import equivalent


def consecutive_monitor():
    alphabet = consecutiveAlphabet()
    return synthesize_monitor(
        buchiFixture("no_consecutive_c.ba", alphabet),
        buchiFixture("consecutive_c.ba", alphabet),
        alphabet,
    )


class testVerdictAutomaton(unittest.TestCase):
    def test_violation_is_reported_on_the_second_c(self) -> None:
        self.assertEqual(
            verdict_on_prefix(consecutive_monitor(), "acc"),
            [Verdict.NONE, Verdict.NONE, Verdict.BOT],
        )

    def test_verdicts_are_absorbing(self) -> None:
        verdicts = consecutive_monitor().verdicts("ccabab")
        self.assertEqual(verdicts[0], Verdict.NONE)
        self.assertEqual(verdicts[1:], [Verdict.BOT] * 5)

    def test_satisfaction_is_reported_on_the_first_c(self) -> None:
        alphabet = consecutiveAlphabet()
        monitor = synthesize_monitor(
            buchiFixture("some_c.ba", alphabet), None, alphabet
        )

        self.assertEqual(
            monitor.verdicts("abca"),
            [Verdict.NONE, Verdict.NONE, Verdict.TOP, Verdict.TOP],
        )
        self.assertIs(final_verdict(monitor, ""), Verdict.NONE)

    def test_independent_event_does_not_see_the_violation(self) -> None:
        # Only the a-process learns about the first a.
        alphabet = independentAlphabet()
        never_a = buchiFactory(["q"], "q", ["q"], [("q", "b", "q")], letters=["a", "b"])
        monitor = synthesize_monitor(never_a, None, alphabet)

        self.assertEqual(monitor.verdicts("ba"), [Verdict.NONE, Verdict.BOT])
        self.assertEqual(monitor.verdicts("ab"), [Verdict.BOT, Verdict.NONE])

    def test_materialized_table_agrees(self) -> None:
        monitor = consecutive_monitor()
        table = monitor.materialize()
        self.assertEqual(table.initial, 0)
        self.assertIn(
            Verdict.BOT, {verdict for _, verdict in table.transitions.values()}
        )

        letters = monitor.alphabet.letters
        for length in range(6):
            for word in itertools.product(letters, repeat=length):
                self.assertEqual(table.verdicts(word), monitor.verdicts(word))

    def test_table_is_complete(self) -> None:
        table = consecutive_monitor().materialize()
        for state in table.entries:
            for letter in table.alphabet.letters:
                self.assertIn((state, letter), table.transitions)


class testSynthesisErrors(unittest.TestCase):
    def test_overlapping_pair_is_rejected(self) -> None:
        alphabet = consecutiveAlphabet()
        with self.assertRaises(SynthesisError):
            synthesize_monitor(
                buchiFixture("some_c.ba", alphabet),
                buchiFixture("consecutive_c.ba", alphabet),
                alphabet,
            )

    def test_pair_that_misses_lassos_is_rejected(self) -> None:
        alphabet = consecutiveAlphabet()
        with self.assertRaises(SynthesisError):
            synthesize_monitor(
                buchiFixture("consecutive_c.ba", alphabet),
                buchiFactory(["z"], "z", [], [], letters=alphabet.letters),
                alphabet,
            )

    def test_unknown_letter(self) -> None:
        with self.assertRaises(SynthesisError):
            synthesize_monitor(
                buchiFixture("full.ba"), None, independentAlphabet()
            )

    def test_computed_complement_matches_the_given_one(self) -> None:
        alphabet = consecutiveAlphabet()
        automaton = buchiFixture("no_consecutive_c.ba", alphabet)
        computed = synthesize_monitor(automaton, None, alphabet)
        given = consecutive_monitor()

        for word in ["acc", "cac", "abcabcc", "bcbca"]:
            self.assertEqual(computed.verdicts(word), given.verdicts(word))
        self.assertFalse(complement(automaton).accepts_lasso("", "ab"))


def test_verdicts_are_sound_on_lassos() -> None:
    alphabet = consecutiveAlphabet()
    some_c = buchiFixture("some_c.ba", alphabet)
    no_consecutive_c = buchiFixture("no_consecutive_c.ba", alphabet)
    consecutive_c = buchiFixture("consecutive_c.ba", alphabet)
    satisfied = synthesize_monitor(some_c, None, alphabet)
    violated = consecutive_monitor()
    loops = [("a",), ("b",), ("c",), ("a", "b")]

    for size in range(5):
        for word in itertools.product(alphabet.letters, repeat=size):
            if final_verdict(satisfied, word) is Verdict.TOP:
                assert all(some_c.accepts_lasso(word, v) for v in loops)
            if final_verdict(violated, word) is Verdict.BOT:
                assert all(consecutive_c.accepts_lasso(word, v) for v in loops)
                assert not any(no_consecutive_c.accepts_lasso(word, v) for v in loops)


def events(word, verdicts):
    seen = {}
    keyed = {}
    for letter, verdict in zip(word, verdicts):
        seen[letter] = seen.get(letter, 0) + 1
        keyed[(letter, seen[letter])] = verdict
    return keyed


def test_event_verdicts_depend_on_the_trace_only() -> None:
    alphabet = consecutiveAlphabet()
    monitor = consecutive_monitor()

    for size in range(5):
        for word in itertools.product(alphabet.letters, repeat=size):
            expected = events(word, monitor.verdicts(word))
            for other in set(itertools.permutations(word)):
                if equivalent(alphabet, word, other):
                    assert events(other, monitor.verdicts(other)) == expected


def test_independent_events_keep_their_verdicts_when_swapped() -> None:
    alphabet = independentAlphabet()
    never_a = buchiFactory(["q"], "q", ["q"], [("q", "b", "q")], letters=["a", "b"])
    monitor = synthesize_monitor(never_a, None, alphabet)

    for word in ["abab", "baba", "aabb", "bbaa"]:
        keyed = events(word, monitor.verdicts(word))
        assert keyed[("a", 1)] is Verdict.BOT
        assert all(keyed[("b", k)] is Verdict.NONE for k in (1, 2))


def test_violation_verdicts_match_closure_rejections() -> None:
    alphabet = consecutiveAlphabet()
    monitor = consecutive_monitor()
    recognizer = build_closure_recognizer(
        buchiFixture("no_consecutive_c.ba", alphabet), alphabet
    )

    for size in range(6):
        for word in itertools.product(alphabet.letters, repeat=size):
            verdicts = monitor.verdicts(word)
            for position, letter in enumerate(word):
                state = recognizer.run(word[:position])
                rejected = not recognizer.permits(state, letter)
                assert (verdicts[position] is Verdict.BOT) == rejected
