"""Wire recycling engine.

The only graph mutation is the splice ``output -> input``: a measured ancilla
hands its wire to a freshly initialized one.  The splice is legal when the
input does not already reach the output, otherwise the graph would get a
cycle.  :func:`recycle` drives the splices greedily, visiting ancilla inputs
that reach the fewest ancilla outputs first, and asks a heuristic (M1 or M2)
which output to pair each input with.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .causal import CausalGraph, GraphError, NodeType

log = logging.getLogger(__name__)


class Heuristic(Enum):
    M1 = "M1"
    M2 = "M2"

    @classmethod
    def parse(cls, text: str) -> "Heuristic":
        return cls(text.upper())


class M1Mode(Enum):
    SIGNED = "signed"
    ABSOLUTE = "absolute"


class TransformationError(GraphError):
    pass


@dataclass
class RecyclePlan:
    added_edges: list[tuple[int, int]] = field(default_factory=list)
    wire_assignment: dict[int, int] = field(default_factory=dict)
    heuristic: Heuristic = Heuristic.M1

    @property
    def recycled_count(self) -> int:
        return len(self.added_edges)

    @property
    def final_wires(self) -> int:
        return len(set(self.wire_assignment.values()))


Precedes = Callable[[int, int], bool]


class _Reachability:
    """Reachability bitsets kept current under splice insertions.

    ``bits[u]`` has bit ``v`` set iff ``u`` reaches ``v``.  Inserting
    ``o -> a`` only grows the sets of ``o`` and its ancestors.
    """

    def __init__(self, g: CausalGraph):
        self.g = g
        bits = [0] * len(g)
        for u in reversed(g.topological_order()):
            acc = 0
            for v in g.succ[u]:
                acc |= bits[v] | (1 << v)
            bits[u] = acc
        self.bits = bits

    def precedes(self, u: int, v: int) -> bool:
        return bool((self.bits[u] >> v) & 1)

    def add_edge(self, o: int, a: int) -> None:
        gain = self.bits[a] | (1 << a)
        bits = self.bits
        stack = [o]
        seen = {o}
        while stack:
            u = stack.pop()
            if bits[u] & gain == gain:
                continue  # ancestors of u already contain it too
            bits[u] |= gain
            for p in self.g.pred[u]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)


def _check_ancilla_input(g: CausalGraph, a: int) -> None:
    g._check_id(a)
    node = g.nodes[a]
    if node.type is not NodeType.INPUT or not node.state.fixed:
        raise TransformationError(f"node {a} is not an ancilla input")


def _check_ancilla_output(g: CausalGraph, o: int) -> None:
    g._check_id(o)
    node = g.nodes[o]
    if node.type is not NodeType.OUTPUT or not node.basis.fixed:
        raise TransformationError(f"node {o} is not an ancilla output")


def _splice(g: CausalGraph, o: int, a: int) -> None:
    g.add_edge(o, a)
    g.recycling_edges.append((o, a))
    old, new = g.nodes[a].wire, g.nodes[o].wire
    for u in g.descendants(a) | {a}:
        wires = g.nodes[u].wires
        for i, w in enumerate(wires):
            if w == old:
                wires[i] = new


def apply_transformation(g: CausalGraph, o: int, a: int) -> None:
    """Add the recycling edge ``o -> a`` and move ``a``'s wire onto ``o``'s.

    Raises :class:`TransformationError` and leaves ``g`` untouched when the
    splice is not allowed.
    """
    _check_ancilla_output(g, o)
    _check_ancilla_input(g, a)
    for oo, aa in g.recycling_edges:
        if oo == o:
            raise TransformationError(f"output node {o} already recycled")
        if aa == a:
            raise TransformationError(f"input node {a} already recycled")
    if g.precedes(a, o):
        raise TransformationError(f"input node {a} precedes output node {o}: splice would create a cycle")
    _splice(g, o, a)


def find_candidate_m1(g: CausalGraph, a: int, pool: Iterable[int],
                      mode: M1Mode = M1Mode.ABSOLUTE,
                      precedes: Optional[Precedes] = None) -> Optional[int]:
    """Pick the pool output whose wire label best matches ``a``'s.

    ABSOLUTE (the default) takes the nearest output wire, ``|o.wire - a.wire|``;
    SIGNED takes the literal minimum of ``o.wire - a.wire``, which favours the
    topmost output.
    Ties go to the smaller output wire, then the smaller node id.
    """
    _check_ancilla_input(g, a)
    precedes = precedes or g.precedes
    aw = g.nodes[a].wire
    best_key, best = None, None
    for o in pool:
        if precedes(a, o):
            continue
        ow = g.nodes[o].wire
        diff = ow - aw
        key = (diff if mode is M1Mode.SIGNED else abs(diff), ow, o)
        if best_key is None or key < best_key:
            best_key, best = key, o
    return best


def find_candidate_m2(g: CausalGraph, a: int, pool: Iterable[int],
                      precedes: Optional[Precedes] = None) -> Optional[int]:
    """Best-first search from ``a`` that may walk edges backwards.

    Costs are ``(backward steps, path length)`` compared lexicographically,
    so forward moves are always preferred.  The first pool output that is
    settled with at least one backward step and is not reachable from ``a``
    wins; equal costs are resolved by node id through the heap ordering.
    """
    _check_ancilla_input(g, a)
    precedes = precedes or g.precedes
    pool = set(pool)
    if not pool:
        return None
    settled = set()
    heap = [(0, 0, a)]
    while heap:
        nr, length, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        if nr and u in pool and not precedes(a, u):
            return u
        for v in g.succ[u]:
            if v not in settled:
                heapq.heappush(heap, (nr, length + 1, v))
        for v in g.pred[u]:
            if v not in settled:
                heapq.heappush(heap, (nr + 1, length + 1, v))
    return None


def recycle(g: CausalGraph, heuristic: Heuristic = Heuristic.M1,
            m1_mode: M1Mode = M1Mode.ABSOLUTE) -> RecyclePlan:
    """Run the greedy recycling loop on a freshly built graph, mutating it."""
    if g.recycling_edges:
        raise TransformationError("graph has already been recycled")
    inputs = g.ancilla_inputs()
    outputs = g.ancilla_outputs()
    reach = _Reachability(g)
    oa_mask = 0
    for o in outputs:
        oa_mask |= 1 << o
    pool = list(outputs)
    remaining = list(inputs)

    while remaining:
        # queue rebuilt from scratch: highest |OA| - n_a first, smaller id on ties
        a = min(remaining, key=lambda x: ((reach.bits[x] & oa_mask).bit_count(), x))
        remaining.remove(a)
        if heuristic is Heuristic.M1:
            o = find_candidate_m1(g, a, pool, m1_mode, reach.precedes)
        else:
            o = find_candidate_m2(g, a, pool, reach.precedes)
        if o is None:
            continue
        _splice(g, o, a)
        reach.add_edge(o, a)
        pool.remove(o)
        log.debug("recycled %s -> %s", g.nodes[o].describe(), g.nodes[a].describe())

    return RecyclePlan(
        added_edges=list(g.recycling_edges),
        wire_assignment={q: g.nodes[n].wire for q, n in sorted(g.inputs_by_qubit.items())},
        heuristic=heuristic,
    )
