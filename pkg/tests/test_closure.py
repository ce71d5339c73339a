import itertools
import random
import unittest
from unittest.mock import patch

from factories import (
    buchiFixture,
    consecutiveAlphabet,
    exampleAlphabet,
    exampleAutomaton,
    fixturePath,
    independentAlphabet,
    randomAsyncAutomaton,
)

from automata.omega import Dfa
from interfaces.automata import read_automaton
from monitoring import MonitoringError
from monitoring.closure import (
    build_closure_recognizer,
    classify_locally_safety,
    failing_prime_prefix,
    in_closure,
    in_prime_set,
    view_family,
)
from traces import NotPrime, enumerate_traces, join, prime_prefixes, trace_of_word


class testViewFamily(unittest.TestCase):
    def test_family_is_sorted_by_size(self) -> None:
        self.assertEqual(
            view_family(consecutiveAlphabet()),
            (
                frozenset({"alpha"}),
                frozenset({"beta"}),
                frozenset({"alpha", "beta"}),
            ),
        )

    def test_family_is_union_closed(self) -> None:
        family = set(view_family(exampleAlphabet()))
        for left, right in itertools.product(family, repeat=2):
            self.assertIn(left | right, family)

    @patch("monitoring.closure.VIEW_FAMILY_CAP", 2)
    def test_family_cap(self) -> None:
        with self.assertRaises(MonitoringError):
            view_family(exampleAlphabet())


class testPrimeClosure(unittest.TestCase):
    def test_failing_prime_is_the_whole_violation(self) -> None:
        alphabet = consecutiveAlphabet()
        automaton = buchiFixture("no_consecutive_c.ba", alphabet)
        trace = trace_of_word(alphabet, "acc")

        failing = failing_prime_prefix(automaton, trace)
        self.assertEqual(failing.normal_form, ("a", "c", "c"))
        self.assertFalse(in_closure(automaton, trace))

    def test_independent_words_stay_in_closure(self) -> None:
        alphabet = consecutiveAlphabet()
        automaton = buchiFixture("no_consecutive_c.ba", alphabet)
        self.assertTrue(in_closure(automaton, trace_of_word(alphabet, "abcab")))

    def test_closure_is_larger_than_the_prefixes(self) -> None:
        # ab is no prefix of a^ω ∪ b^ω, yet both its primes are.
        alphabet = independentAlphabet()
        automaton = buchiFixture("no_a_or_no_b.ba", alphabet)
        trace = trace_of_word(alphabet, "ab")

        self.assertTrue(in_closure(automaton, trace))
        self.assertTrue(build_closure_recognizer(automaton, alphabet).accepts("ab"))

    def test_prime_set_needs_a_prime(self) -> None:
        alphabet = independentAlphabet()
        with self.assertRaises(NotPrime):
            in_prime_set(
                buchiFixture("no_a_or_no_b.ba", alphabet),
                trace_of_word(alphabet, "ab"),
            )

    def test_recognizer_reports_the_rejected_position(self) -> None:
        alphabet = consecutiveAlphabet()
        recognizer = build_closure_recognizer(
            buchiFixture("no_consecutive_c.ba", alphabet), alphabet
        )
        self.assertEqual(recognizer.rejection_position("abacc"), 4)
        self.assertIsNone(recognizer.rejection_position("acacb"))


def test_recognizer_agrees_with_prime_prefixes() -> None:
    alphabet = consecutiveAlphabet()
    automaton = buchiFixture("no_consecutive_c.ba", alphabet)
    recognizer = build_closure_recognizer(automaton, alphabet)
    for length in range(6):
        for word in itertools.product(alphabet.letters, repeat=length):
            trace = trace_of_word(alphabet, word)
            assert recognizer.accepts(word) == in_closure(automaton, trace)


def test_recognizer_agrees_on_the_example_system() -> None:
    alphabet = exampleAlphabet()
    automaton = exampleAutomaton().global_expansion().to_buchi()
    recognizer = build_closure_recognizer(automaton, alphabet)
    for length in range(5):
        for word in itertools.product(alphabet.letters, repeat=length):
            trace = trace_of_word(alphabet, word)
            assert recognizer.accepts(word) == in_closure(automaton, trace)


class testLocallySafety(unittest.TestCase):
    def test_no_consecutive_c_is_locally_safety(self) -> None:
        alphabet = consecutiveAlphabet()
        report = classify_locally_safety(
            read_automaton(fixturePath("no_consecutive_c.dfa"), Dfa),
            buchiFixture("no_consecutive_c.ba", alphabet),
            alphabet,
        )
        self.assertTrue(report.prefix_closed)
        self.assertTrue(report.forward_diamond)
        self.assertTrue(report.omega_safety)
        self.assertTrue(report.locally_safety)
        self.assertIsNone(report.violation)

    def test_omega_part_must_be_safety(self) -> None:
        alphabet = consecutiveAlphabet()
        report = classify_locally_safety(
            read_automaton(fixturePath("no_consecutive_c.dfa"), Dfa),
            buchiFixture("some_c.ba", alphabet),
            alphabet,
        )
        self.assertFalse(report.omega_safety)
        self.assertFalse(report.locally_safety)

    def test_missing_diamond(self) -> None:
        report = classify_locally_safety(
            read_automaton(fixturePath("no_a_parallel_b.dfa"), Dfa),
            None,
            consecutiveAlphabet(),
        )
        self.assertTrue(report.prefix_closed)
        self.assertFalse(report.forward_diamond)
        self.assertIsNone(report.omega_safety)
        self.assertEqual(report.violation, ((), "a", "b"))
        self.assertFalse(report.locally_safety)


def joins_of_prime_members(automaton, trace):
    members = [p for p in prime_prefixes(trace) if in_prime_set(automaton, p)]
    return any(
        join(subset) == trace
        for size in range(1, len(members) + 1)
        for subset in itertools.combinations(members, size)
    )


def test_closure_is_the_set_of_joins_of_prime_members() -> None:
    rng = random.Random(31)
    consecutive = consecutiveAlphabet()
    independent = independentAlphabet()
    cases = [
        (buchiFixture("no_consecutive_c.ba", consecutive), consecutive),
        (buchiFixture("no_a_or_no_b.ba", independent), independent),
    ]
    for _ in range(5):
        system = randomAsyncAutomaton(rng, consecutive)
        cases.append((system.global_expansion().to_buchi(), consecutive))

    for automaton, alphabet in cases:
        recognizer = build_closure_recognizer(automaton, alphabet)
        for trace in enumerate_traces(alphabet, 5)[1:]:
            expected = joins_of_prime_members(automaton, trace)
            assert in_closure(automaton, trace) == expected
            assert recognizer.accepts(trace.normal_form) == expected
