import itertools
import unittest

import pytest
from factories import (
    alphabetFactory,
    consecutiveAlphabet,
    exampleAlphabet,
    independentAlphabet,
)

from traces import (
    NotPrime,
    PrimalityTracker,
    TraceError,
    UnknownLetter,
    UnknownProcess,
    as_word,
    empty_trace,
    enumerate_primes,
    enumerate_traces,
    equivalent,
    join,
    max_and_prime,
    normal_form,
    prime_prefixes,
    trace_of_word,
    tracker_of_word,
)


def swap_closure(alphabet, word):
    seen = {tuple(word)}
    frontier = [tuple(word)]
    while frontier:
        current = frontier.pop()
        for i in range(len(current) - 1):
            a, b = current[i], current[i + 1]
            if a != b and alphabet.independent(a, b):
                swapped = current[:i] + (b, a) + current[i + 2 :]
                if swapped not in seen:
                    seen.add(swapped)
                    frontier.append(swapped)
    return seen


class testDistributedAlphabet(unittest.TestCase):
    def test_independence_follows_domains(self) -> None:
        alphabet = exampleAlphabet()
        self.assertTrue(alphabet.independent("c", "d"))
        self.assertTrue(alphabet.independent("a", "d"))
        self.assertFalse(alphabet.independent("a", "b"))
        self.assertFalse(alphabet.independent("a", "a"))

    def test_components(self) -> None:
        self.assertTrue(exampleAlphabet().is_connected())
        components = independentAlphabet().components()
        self.assertEqual(
            sorted(sorted(c) for c in components), [["a"], ["b"]]
        )

    def test_unknown_letter(self) -> None:
        with self.assertRaises(UnknownLetter):
            trace_of_word(exampleAlphabet(), "ax")

    def test_empty_domain_is_rejected(self) -> None:
        with self.assertRaises(TraceError):
            alphabetFactory({"a": []})

    def test_as_word_splits_on_whitespace(self) -> None:
        self.assertEqual(as_word("b a d"), ("b", "a", "d"))
        self.assertEqual(as_word("bad"), ("b", "a", "d"))


class testTrace(unittest.TestCase):
    def test_example_trace_is_prime_with_final_b_maximal(self) -> None:
        trace = trace_of_word(exampleAlphabet(), "cbadcbadb")
        maximal, prime = max_and_prime(trace)

        self.assertTrue(prime)
        self.assertEqual(maximal, frozenset({8}))
        self.assertEqual(trace.label(8), "b")

    def test_normal_form_is_lexicographically_least(self) -> None:
        alphabet = independentAlphabet()
        self.assertEqual(normal_form(alphabet, "ba"), ("a", "b"))
        self.assertTrue(equivalent(alphabet, "ab", "ba"))
        self.assertFalse(equivalent(consecutiveAlphabet(), "ac", "ca"))

    def test_empty_trace_is_not_prime(self) -> None:
        self.assertFalse(empty_trace(exampleAlphabet()).is_prime)

    def test_two_independent_letters_are_not_prime(self) -> None:
        trace = trace_of_word(independentAlphabet(), "ab")
        self.assertEqual(len(trace.maximal_events), 2)
        self.assertFalse(trace.is_prime)

    def test_prime_prefixes_of_a_prime(self) -> None:
        trace = trace_of_word(exampleAlphabet(), "cbadcbadb")
        prefixes = prime_prefixes(trace)

        self.assertIn(trace, prefixes)
        for prefix in prefixes:
            self.assertTrue(prefix.is_prime)
            self.assertTrue(prefix.is_prefix_of(trace))

    def test_join_of_coherent_traces(self) -> None:
        alphabet = consecutiveAlphabet()
        joined = join([trace_of_word(alphabet, "a"), trace_of_word(alphabet, "b")])
        self.assertEqual(joined.normal_form, ("a", "b"))

    def test_join_of_incoherent_traces(self) -> None:
        alphabet = consecutiveAlphabet()
        self.assertIsNone(
            join([trace_of_word(alphabet, "a"), trace_of_word(alphabet, "c")])
        )

    def test_views(self) -> None:
        alphabet = exampleAlphabet()
        trace = trace_of_word(alphabet, "cbadcbadb")

        self.assertEqual(trace.view(alphabet.processes), trace)
        self.assertEqual(len(trace.view([])), 0)
        # p last acted in the second a, which does not see the final b.
        self.assertEqual(trace.view(["p"]), trace.past(6))

    def test_view_of_unknown_process(self) -> None:
        with self.assertRaises(UnknownProcess):
            trace_of_word(exampleAlphabet(), "b").view(["z"])

    def test_past_of_appended_event_is_view_plus_event(self) -> None:
        alphabet = exampleAlphabet()
        for word in ["cbad", "bdcb", "cbadcb"]:
            trace = trace_of_word(alphabet, word)
            for letter in alphabet.letters:
                extended = trace.extend(letter)
                expected = trace.view(alphabet.dom[letter]).extend(letter)
                self.assertEqual(extended.past(len(extended) - 1), expected)


def test_tracker_agrees_with_maximal_events() -> None:
    alphabet = exampleAlphabet()
    for length in range(6):
        for word in itertools.product(alphabet.letters, repeat=length):
            trace = trace_of_word(alphabet, word)
            prime, last = tracker_of_word(alphabet, word).status(alphabet)

            assert prime == trace.is_prime
            if prime:
                (top,) = trace.maximal_events
                assert last == trace.label(top)


def test_normal_forms_agree_with_swap_closure() -> None:
    alphabet = exampleAlphabet()
    words = [w for n in range(5) for w in itertools.product(alphabet.letters, repeat=n)]
    for word in words:
        closure = swap_closure(alphabet, word)
        assert normal_form(alphabet, word) == min(closure)
        for other in closure:
            assert equivalent(alphabet, word, other)


def test_join_is_least_upper_bound() -> None:
    alphabet = consecutiveAlphabet()
    traces = enumerate_traces(alphabet, 3)
    larger = enumerate_traces(alphabet, 6)
    for s, t in itertools.product(traces, repeat=2):
        joined = join([s, t])
        if joined is None:
            assert not any(
                s.is_prefix_of(u) and t.is_prefix_of(u)
                for u in larger
            )
            continue
        assert s.is_prefix_of(joined) and t.is_prefix_of(joined)
        assert len(joined) == len(s.identities | t.identities)


def test_enumerate_primes_only_returns_primes() -> None:
    primes = enumerate_primes(exampleAlphabet(), 3)
    assert primes
    assert all(p.is_prime for p in primes)
    assert len({p.normal_form for p in primes}) == len(primes)


def test_tracker_starts_empty() -> None:
    assert PrimalityTracker().status(exampleAlphabet()) == (False, None)


def test_not_prime_is_a_trace_error() -> None:
    assert issubclass(NotPrime, TraceError)


@pytest.mark.parametrize("word", ["", "a", "ab", "abab"])
def test_independent_letters_in_normal_form(word) -> None:
    alphabet = independentAlphabet()
    form = normal_form(alphabet, word)
    assert list(form) == sorted(word)
