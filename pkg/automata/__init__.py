from collections import deque
from typing import Callable, Hashable, Iterable, Optional, TypeVar

import networkx as nx

Node = TypeVar("Node", bound=Hashable)

_ROOT = object()


class AutomatonError(Exception):
    pass


class ComplementCapExceeded(AutomatonError):
    def __init__(self, size: int, cap: int) -> None:
        super().__init__(
            "Rank-based complementation needs {} states, cap is {}".format(size, cap)
        )
        self.size = size
        self.cap = cap


class NotTraceClosed(AutomatonError):
    pass


class NotDeterministic(AutomatonError):
    pass


def explore_labelled(
    initial: Iterable[Node],
    successors: Callable[[Node], Iterable[tuple[str, Node]]],
    cap: Optional[int] = None,
) -> nx.DiGraph:
    """Breadth-first materialisation of the reachable graph. Nodes keep their
    discovery order; an edge keeps the first letter that produced it."""
    graph = nx.DiGraph()
    frontier = deque()
    for node in initial:
        if node not in graph:
            graph.add_node(node)
            frontier.append(node)

    while frontier:
        node = frontier.popleft()
        for letter, successor in successors(node):
            if successor not in graph:
                if cap is not None and len(graph) >= cap:
                    raise AutomatonError(
                        "Graph exploration exceeded {} nodes".format(cap)
                    )
                graph.add_node(successor)
                frontier.append(successor)
            if not graph.has_edge(node, successor):
                graph.add_edge(node, successor, letter=letter)

    return graph


def explore(
    initial: Iterable[Node],
    successors: Callable[[Node], Iterable[Node]],
    cap: Optional[int] = None,
) -> nx.DiGraph:
    return explore_labelled(
        initial, lambda node: ((None, t) for t in successors(node)), cap
    )


def words_from(graph: nx.DiGraph, source: Node) -> dict[Node, tuple[str, ...]]:
    """Shortest labelled word to every node reachable from ``source``, in
    breadth-first order."""
    return {
        node: tuple(graph.edges[u, v]["letter"] for u, v in zip(path, path[1:]))
        for node, path in nx.single_source_shortest_path(graph, source).items()
    }


def shortest_paths(
    initial: Node,
    successors: Callable[[Node], Iterable[tuple[str, Node]]],
    cap: Optional[int] = None,
) -> dict[Node, tuple[str, ...]]:
    return words_from(explore_labelled([initial], successors, cap), initial)


def shortest_cycle(graph: nx.DiGraph, start: Node) -> Optional[tuple[str, ...]]:
    """Shortest labelled cycle through ``start``, or None."""
    paths = words_from(graph, start)
    loops = [
        paths[p] + (graph.edges[p, start]["letter"],)
        for p in graph.predecessors(start)
        if p in paths
    ]
    return min(loops, key=len, default=None)


def is_nontrivial(component: Iterable[Node], graph: nx.DiGraph) -> bool:
    component = list(component)
    if len(component) > 1:
        return True
    return graph.has_edge(component[0], component[0])


def cyclic_components(graph: nx.DiGraph) -> list[set[Node]]:
    return [
        component
        for component in nx.strongly_connected_components(graph)
        if is_nontrivial(component, graph)
    ]


def has_accepting_cycle(graph: nx.DiGraph, accepting: Callable[[Node], bool]) -> bool:
    return any(
        any(accepting(n) for n in component) for component in cyclic_components(graph)
    )


def can_reach(graph: nx.DiGraph, targets: Iterable[Node]) -> set[Node]:
    """Nodes of ``graph`` from which some target is reachable (targets included)."""
    reverse = graph.reverse(copy=True)
    reverse.add_node(_ROOT)
    reverse.add_edges_from((_ROOT, target) for target in targets)
    return nx.descendants(reverse, _ROOT)
