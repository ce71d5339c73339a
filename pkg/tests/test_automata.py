import itertools
import random
import unittest
from unittest.mock import patch

import pytest
from factories import (
    buchiFactory,
    buchiFixture,
    consecutiveAlphabet,
    fixturePath,
    independentAlphabet,
    randomBuchi,
)

from automata import (
    AutomatonError,
    ComplementCapExceeded,
    NotDeterministic,
    NotTraceClosed,
    can_reach,
    explore,
    explore_labelled,
    has_accepting_cycle,
    shortest_cycle,
    shortest_paths,
)
from automata.omega import (
    BuchiAutomaton,
    Dfa,
    Nfa,
    ResidualClass,
    complement,
    dfa_forward_diamond,
    dfa_prefix_closed,
    dfa_trace_closed,
    forward_diamond_violation,
    intersection_is_empty,
    is_safety,
    prefix_swap_closed,
    residual_class,
    swap_closed_check,
    validate_trace_closed,
)
from interfaces.automata import read_automaton


def infinitely_many_a():
    return buchiFactory(
        ["q0", "q1"],
        "q0",
        ["q1"],
        [("q0", "a", "q1"), ("q0", "b", "q0"), ("q1", "a", "q1"), ("q1", "b", "q0")],
    )


def lassos(letters, size):
    words = [w for n in range(size + 1) for w in itertools.product(letters, repeat=n)]
    return [(u, v) for u in words for v in words if v]


class testBuchiAutomaton(unittest.TestCase):
    def test_undeclared_state_is_rejected(self) -> None:
        with self.assertRaises(AutomatonError):
            buchiFactory(["q0"], "q0", [], [("q0", "a", "q9")])

    def test_empty_subset_is_empty(self) -> None:
        self.assertIs(
            residual_class(infinitely_many_a(), frozenset()), ResidualClass.EMPTY
        )

    def test_complete_looping_automaton_is_universal(self) -> None:
        automaton = buchiFixture("full.ba")
        self.assertIs(residual_class(automaton, {"f"}), ResidualClass.UNIVERSAL)

    def test_infinitely_many_a_is_other(self) -> None:
        self.assertIs(
            residual_class(infinitely_many_a(), {"q0"}), ResidualClass.OTHER
        )

    def test_residual_after_violation(self) -> None:
        automaton = buchiFixture("no_consecutive_c.ba")
        self.assertIs(
            automaton.residual_class(automaton.subset_after("acc")),
            ResidualClass.EMPTY,
        )
        self.assertIs(
            automaton.residual_class(automaton.subset_after("ac")),
            ResidualClass.OTHER,
        )

    def test_accepts_lasso(self) -> None:
        automaton = buchiFixture("no_consecutive_c.ba")
        self.assertTrue(automaton.accepts_lasso("", "ac"))
        self.assertFalse(automaton.accepts_lasso("", "c"))
        self.assertFalse(automaton.accepts_lasso("acc", "a"))

    def test_lasso_needs_a_loop(self) -> None:
        with self.assertRaises(AutomatonError):
            infinitely_many_a().accepts_lasso("a", "")

    def test_with_letters_keeps_identity_when_nothing_is_new(self) -> None:
        automaton = infinitely_many_a()
        self.assertIs(automaton.with_letters(["a"]), automaton)
        self.assertEqual(automaton.with_letters(["c"]).letters, ("a", "b", "c"))

    def test_union(self) -> None:
        union = BuchiAutomaton.union(
            [buchiFixture("some_c.ba"), buchiFixture("no_consecutive_c.ba")]
        )
        self.assertTrue(union.accepts_lasso("cc", "a"))
        self.assertTrue(union.accepts_lasso("", "ab"))


class testComplement(unittest.TestCase):
    def test_complement_of_universal_is_empty(self) -> None:
        result = complement(buchiFixture("full.ba"))
        self.assertTrue(result.is_empty_from({result.initial}))

    def test_complement_of_empty_is_universal(self) -> None:
        empty = buchiFactory(["q0"], "q0", [], [("q0", "a", "q0")])
        result = complement(empty)
        self.assertTrue(result.is_universal_from({result.initial}))

    def test_complement_of_no_consecutive_c(self) -> None:
        result = complement(buchiFixture("no_consecutive_c.ba"))
        self.assertTrue(result.accepts_lasso("acc", "a"))
        self.assertFalse(result.accepts_lasso("", "ac"))

    def test_cap_applies_to_rank_based_construction(self) -> None:
        states = ["q{}".format(i) for i in range(4)]
        transitions = [(q, "a", r) for q in states for r in states]
        automaton = buchiFactory(states, "q0", ["q0"], transitions)
        with patch("automata.omega.COMPLEMENT_STATE_CAP", 3):
            with self.assertRaises(ComplementCapExceeded):
                complement(automaton)

    def test_complement_partitions_lassos(self) -> None:
        rng = random.Random(7)
        for _ in range(12):
            automaton = randomBuchi(rng, ("a", "b"))
            result = complement(automaton)
            for u, v in lassos(("a", "b"), 2):
                self.assertNotEqual(
                    automaton.accepts_lasso(u, v), result.accepts_lasso(u, v)
                )


def test_intersection_emptiness() -> None:
    safe = buchiFixture("no_consecutive_c.ba")
    assert intersection_is_empty(safe, buchiFixture("consecutive_c.ba"))
    assert not intersection_is_empty(safe, buchiFixture("full.ba"))


def test_safety() -> None:
    assert is_safety(buchiFixture("no_consecutive_c.ba"))
    assert not is_safety(buchiFixture("some_c.ba"))


def test_trace_closed_languages_pass_validation() -> None:
    alphabet = consecutiveAlphabet()
    for name in ["no_consecutive_c.ba", "consecutive_c.ba", "some_c.ba"]:
        validate_trace_closed(buchiFixture(name, alphabet), alphabet)


def test_order_sensitive_language_fails_validation() -> None:
    alphabet = independentAlphabet()
    # a must come before the first b: not closed under swapping a and b.
    automaton = buchiFactory(
        ["i", "x"], "i", ["x"], [("i", "a", "x"), ("x", "a", "x"), ("x", "b", "x")]
    )
    assert not prefix_swap_closed(automaton, alphabet)
    assert not swap_closed_check(automaton, alphabet)
    try:
        validate_trace_closed(automaton, alphabet)
    except NotTraceClosed:
        pass
    else:
        raise AssertionError("validation should fail")


class testDfa(unittest.TestCase):
    def test_determinism_is_checked(self) -> None:
        with self.assertRaises(NotDeterministic):
            Dfa(
                ("0", "1"),
                "0",
                frozenset(),
                frozenset({("0", "a", "0"), ("0", "a", "1")}),
                ("a",),
            )

    def test_minimized_accepts_the_same_words(self) -> None:
        dfa = read_automaton(fixturePath("no_a_parallel_b.dfa"), Dfa)
        minimal = dfa.minimized()
        for n in range(5):
            for word in itertools.product(dfa.letters, repeat=n):
                self.assertEqual(dfa.accepts(word), minimal.accepts(word))

    def test_no_consecutive_c_is_prefix_closed_and_diamond(self) -> None:
        alphabet = consecutiveAlphabet()
        dfa = read_automaton(fixturePath("no_consecutive_c.dfa"), Dfa)
        self.assertTrue(dfa_prefix_closed(dfa))
        self.assertTrue(dfa_forward_diamond(dfa, alphabet))
        self.assertTrue(dfa_trace_closed(dfa, alphabet))

    def test_forward_diamond_fails_at_empty_prefix(self) -> None:
        alphabet = consecutiveAlphabet()
        dfa = read_automaton(fixturePath("no_a_parallel_b.dfa"), Dfa)
        self.assertEqual(forward_diamond_violation(dfa, alphabet), ((), "a", "b"))
        self.assertTrue(dfa_trace_closed(dfa, alphabet))


class testNfa(unittest.TestCase):
    def test_completion_adds_a_rejecting_sink(self) -> None:
        nfa = Nfa(
            ("n0",),
            "n0",
            frozenset({"n0"}),
            frozenset({("n0", "x", "n0")}),
            ("x", "y"),
        )
        completed = nfa.completed()

        self.assertTrue(completed.is_complete)
        self.assertIn("sink", completed.states)
        self.assertFalse(completed.accepts("y"))

    def test_universality(self) -> None:
        all_words = read_automaton(fixturePath("all_words.nfa"), Nfa)
        ends_in_x = read_automaton(fixturePath("ends_in_x.nfa"), Nfa)
        self.assertTrue(all_words.is_universal())
        self.assertFalse(ends_in_x.is_universal())


def counter(n):
    """Successors i -> i+1, i+2 modulo n, labelled by the step size."""
    return lambda i: [("+1", (i + 1) % n), ("+2", (i + 2) % n)]


def test_shortest_paths_follow_successor_order() -> None:
    paths = shortest_paths(0, counter(5))

    assert list(paths) == [0, 1, 2, 3, 4]
    assert paths[3] == ("+1", "+2")
    assert paths[4] == ("+2", "+2")


def test_exploration_cap() -> None:
    with pytest.raises(AutomatonError):
        shortest_paths(0, counter(5), cap=3)
    with pytest.raises(AutomatonError):
        explore([0], lambda i: [i + 1], cap=10)


def test_can_reach() -> None:
    graph = explore([0], lambda i: [i + 1] if i < 3 else [])

    assert can_reach(graph, [2]) == {0, 1, 2}
    assert can_reach(graph, []) == set()


def test_cycles() -> None:
    line = explore([0], lambda i: [i + 1] if i < 3 else [])
    loop = explore([0], lambda i: [(i + 1) % 3])

    assert not has_accepting_cycle(line, lambda i: True)
    assert has_accepting_cycle(loop, lambda i: i == 2)
    assert shortest_cycle(explore_labelled([0], counter(4)), 0) == ("+2", "+2")
    assert shortest_cycle(line, 0) is None
