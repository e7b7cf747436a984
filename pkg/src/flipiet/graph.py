"""The signed induction graph: vertices are irreducible signed permutations,
edges apply the type-a and type-b transitions when the target stays
irreducible.

Cycle searches are anchored depth-first walks; with out-degree at most two
the search tree stays small for the lengths used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import matrices
from .perm import (
    SignedPermutation,
    apply_type,
    irreducible_signed_permutations,
    is_irreducible,
)

__all__ = [
    "RauzyPath",
    "RauzyGraph",
    "build_graph",
    "find_cycles_through",
    "find_cycles_with_product",
    "is_special",
    "canonicalize_cycle",
]

GRAPH_N_MIN = 2
GRAPH_N_MAX = 6
DEFAULT_SPECIAL_SEARCH_LEN = 20


@dataclass(frozen=True)
class RauzyPath:
    """A directed path: N+1 vertices joined by N typed transition steps.

    ``types`` is a string over {'a','b'}; vertex i+1 must be the type
    ``types[i]`` transition of vertex i, which is checked on construction.
    """

    vertices: tuple[SignedPermutation, ...]
    types: str

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.types) + 1:
            raise ValueError(
                f"{len(self.vertices)} vertices need {len(self.vertices) - 1} types,"
                f" got {len(self.types)}"
            )
        if any(t not in "ab" for t in self.types):
            raise ValueError(f"bad type string {self.types!r}")
        for i, t in enumerate(self.types):
            if apply_type(self.vertices[i], t) != self.vertices[i + 1]:
                raise ValueError(f"step {i + 1} is not the type-{t} transition")

    @property
    def n(self) -> int:
        return self.vertices[0].n

    @property
    def is_cycle(self) -> bool:
        return self.vertices[-1] == self.vertices[0]

    def __len__(self) -> int:
        return len(self.types)

    def product_matrix(self, i: int | None = None) -> matrices.IntMatrix:
        return matrices.path_product(self, i)

    def rotate(self, r: int) -> "RauzyPath":
        """The same cycle read from its r-th vertex."""
        if not self.is_cycle:
            raise ValueError("only cycles can be rotated")
        core = self.vertices[:-1]
        r %= len(core)
        verts = core[r:] + core[: r + 1]
        types = self.types[r:] + self.types[:r]
        return RauzyPath(verts, types)

    def describe(self) -> str:
        return " ".join(
            f"{v.format()} -{t}->" for v, t in zip(self.vertices, self.types)
        ) + f" {self.vertices[-1].format()}"


class RauzyGraph:
    """Vertex and labelled-successor tables for a fixed symbol count."""

    def __init__(self, n: int) -> None:
        if not GRAPH_N_MIN <= n <= GRAPH_N_MAX:
            raise ValueError(
                f"symbol count {n} outside supported range"
                f" {GRAPH_N_MIN}..{GRAPH_N_MAX}"
            )
        self.n = n
        self.vertices: tuple[SignedPermutation, ...] = tuple(
            irreducible_signed_permutations(n)
        )
        vertex_set = set(self.vertices)
        succ: dict[SignedPermutation, tuple[tuple[str, SignedPermutation], ...]] = {}
        for p in self.vertices:
            edges = []
            for t in "ab":
                q = apply_type(p, t)
                if q in vertex_set:
                    edges.append((t, q))
            succ[p] = tuple(edges)
        self.successors = succ

    def __contains__(self, p: SignedPermutation) -> bool:
        return p in self.successors

    def edge_count(self) -> int:
        return sum(len(e) for e in self.successors.values())


@lru_cache(maxsize=None)
def build_graph(n: int) -> RauzyGraph:
    return RauzyGraph(n)


def find_cycles_through(
    g: RauzyGraph, v: SignedPermutation, max_len: int
) -> list[RauzyPath]:
    """All cycles of length <= max_len starting at v and first returning to
    v at their final vertex, in depth-first order."""
    if v not in g:
        raise ValueError(f"{v.format()} is not a vertex of the graph")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    cycles: list[RauzyPath] = []
    stack: list[SignedPermutation] = [v]
    types: list[str] = []

    def walk(current: SignedPermutation) -> None:
        for t, q in g.successors[current]:
            types.append(t)
            if q == v:
                cycles.append(RauzyPath(tuple(stack) + (q,), "".join(types)))
            elif len(types) < max_len:
                stack.append(q)
                walk(q)
                stack.pop()
            types.pop()

    walk(v)
    return cycles


def find_cycles_with_product(
    g: RauzyGraph,
    v: SignedPermutation,
    target: matrices.IntMatrix,
    max_len: int,
    stop_at_first: bool = True,
) -> list[RauzyPath]:
    """Cycles through v whose full product matrix equals ``target`` exactly.

    Entry sums along a path never decrease, which prunes the search hard.
    """
    if v not in g:
        raise ValueError(f"{v.format()} is not a vertex of the graph")
    target_sum = sum(sum(row) for row in target)
    found: list[RauzyPath] = []
    stack: list[SignedPermutation] = [v]
    types: list[str] = []

    def walk(current: SignedPermutation, product: matrices.IntMatrix) -> bool:
        for t, q in g.successors[current]:
            step = matrices.mat_mul(product, matrices.transition_matrix(current, t))
            if sum(sum(row) for row in step) > target_sum:
                continue
            types.append(t)
            if q == v and step == target:
                found.append(RauzyPath(tuple(stack) + (q,), "".join(types)))
                if stop_at_first:
                    types.pop()
                    return True
            if len(types) < max_len:
                stack.append(q)
                done = walk(q, step)
                stack.pop()
                if done:
                    types.pop()
                    return True
            types.pop()
        return False

    walk(v, matrices.identity(v.n))
    return found


def is_special(
    path_or_cycle: RauzyPath, max_cycle_len: int = DEFAULT_SPECIAL_SEARCH_LEN
) -> bool:
    """A cycle is special when its product matrix is eventually positive; a
    non-closed path when its endpoint lies on some special cycle.

    For the path case the cycle search is bounded by ``max_cycle_len``, so a
    negative answer means "not found within the bound", not a proof.
    """
    if path_or_cycle.is_cycle:
        positive, _ = matrices.is_eventually_positive(path_or_cycle.product_matrix())
        return positive
    endpoint = path_or_cycle.vertices[-1]
    g = build_graph(endpoint.n)
    for cycle in find_cycles_through(g, endpoint, max_cycle_len):
        positive, _ = matrices.is_eventually_positive(cycle.product_matrix())
        if positive:
            return True
    return False


def canonicalize_cycle(c: RauzyPath) -> RauzyPath:
    """The lexicographically least rotation of a cycle, comparing vertex
    signed tuples; shift-equivalent cycles share a canonical form."""
    if not c.is_cycle:
        raise ValueError("canonical form is defined for cycles only")
    best = None
    best_key = None
    for r in range(len(c)):
        rotated = c.rotate(r)
        key = tuple(v.signed for v in rotated.vertices)
        if best_key is None or key < best_key:
            best, best_key = rotated, key
    return best
