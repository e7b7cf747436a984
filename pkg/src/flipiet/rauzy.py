"""The induction operator on (lengths, signed permutation) pairs.

One step removes the shorter of the two rightmost intervals (domain-side or
range-side, type b or a) and returns the data of the first-return map on
[0, nu].  New lengths come from direct subtraction, which is exact for the
rational backend and is precisely the inverse of the step's transition
matrix.

Two numeric backends share the code path: exact (ints / fractions) and
float.  Each step records which backend produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from . import matrices
from .graph import RauzyPath
from .perm import SignedPermutation, apply_type, is_irreducible

__all__ = [
    "RauzyState",
    "StepRecord",
    "OrbitRun",
    "BoundaryError",
    "ReducibleError",
    "rauzy_step",
    "rauzy_projective_step",
    "follow_itinerary",
    "renormalization_orbit",
]

# Relative closeness (to the total length) at which the float backend
# declares the two competing lengths equal and stops.
FLOAT_BOUNDARY_RTOL = 1e-12


class BoundaryError(ValueError):
    """The two competing lengths are equal: outside the operator's domain."""


class ReducibleError(ValueError):
    """A reducible permutation appeared along an itinerary."""

    def __init__(self, message: str, index: int) -> None:
        super().__init__(message)
        self.index = index


def backend_of(values: Sequence) -> str:
    return "exact" if all(isinstance(v, Rational) for v in values) else "float"


@dataclass(frozen=True)
class RauzyState:
    """Length vector plus signed permutation; lengths must be positive."""

    lengths: tuple
    perm: SignedPermutation

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(self.lengths))
        if len(self.lengths) != self.perm.n:
            raise ValueError(
                f"{len(self.lengths)} lengths for {self.perm.n} symbols"
            )
        if any(v <= 0 for v in self.lengths):
            raise ValueError("lengths must be strictly positive")

    @property
    def total(self):
        return sum(self.lengths)

    @property
    def backend(self) -> str:
        return backend_of(self.lengths)

    def normalized(self) -> "RauzyState":
        t = self.total
        if self.backend == "exact":
            return RauzyState(tuple(Fraction(v) / t for v in self.lengths), self.perm)
        return RauzyState(tuple(v / t for v in self.lengths), self.perm)


@dataclass(frozen=True)
class StepRecord:
    """One induction step: its type, transition matrix, the right endpoint
    nu of the induction interval, and the state after the step."""

    type: str
    matrix: matrices.IntMatrix
    nu: object
    state_after: RauzyState
    backend: str


def rauzy_step(s: RauzyState) -> StepRecord:
    """Apply one induction step to (lambda, p).

    Raises BoundaryError when lambda_n equals the length of the slot sent
    to n (exact equality for the exact backend, relative closeness
    FLOAT_BOUNDARY_RTOL for floats).
    """
    lam = s.lengths
    p = s.perm
    n = p.n
    k = p.position_of(n)  # 1-based
    lk, ln = lam[k - 1], lam[n - 1]
    if s.backend == "exact":
        if lk == ln:
            raise BoundaryError("competing lengths are equal")
    else:
        if abs(lk - ln) <= FLOAT_BOUNDARY_RTOL * s.total:
            raise BoundaryError("competing lengths are equal within tolerance")
    if lk < ln:
        t = "a"
        new_perm = apply_type(p, "a")
        matrix = matrices.matrix_a(p)
        nu = s.total - lk
        new_lengths = lam[: n - 1] + (ln - lk,)
    else:
        t = "b"
        new_perm = apply_type(p, "b")
        matrix = matrices.matrix_b(p)
        nu = s.total - ln
        if p.theta[k - 1] == 1:
            new_lengths = lam[: k - 1] + (lk - ln, ln) + lam[k : n - 1]
        else:
            new_lengths = lam[: k - 1] + (ln, lk - ln) + lam[k : n - 1]
    after = RauzyState(new_lengths, new_perm)
    return StepRecord(t, matrix, nu, after, s.backend)


def rauzy_projective_step(s: RauzyState) -> StepRecord:
    """An induction step followed by renormalisation to total length 1."""
    rec = rauzy_step(s)
    return StepRecord(rec.type, rec.matrix, rec.nu, rec.state_after.normalized(), rec.backend)


def follow_itinerary(p0: SignedPermutation, types: str) -> RauzyPath:
    """Apply the given transition types starting from p0.

    Every intermediate permutation must stay irreducible; otherwise a
    ReducibleError carrying the failing step index is raised.
    """
    if not is_irreducible(p0):
        raise ReducibleError(f"start {p0.format()} is reducible", 0)
    vertices = [p0]
    for i, t in enumerate(types, start=1):
        q = apply_type(vertices[-1], t)
        if not is_irreducible(q):
            raise ReducibleError(
                f"step {i} ({t}) reaches reducible {q.format()}", i
            )
        vertices.append(q)
    return RauzyPath(tuple(vertices), "".join(types))


@dataclass(frozen=True)
class OrbitRun:
    """A finite run of induction steps and the reason it stopped."""

    steps: tuple[StepRecord, ...]
    stop_reason: str  # 'max_steps' | 'boundary' | 'reducible'

    @property
    def types(self) -> str:
        return "".join(rec.type for rec in self.steps)


def renormalization_orbit(s: RauzyState, max_steps: int) -> OrbitRun:
    """Iterate induction steps up to max_steps.

    Stops early at the domain boundary or when the permutation goes
    reducible; completing all steps certifies finite-depth membership of
    the length vector in the nested cones of the itinerary.
    """
    steps: list[StepRecord] = []
    state = s
    for _ in range(max_steps):
        try:
            rec = rauzy_step(state)
        except BoundaryError:
            return OrbitRun(tuple(steps), "boundary")
        steps.append(rec)
        state = rec.state_after
        if not is_irreducible(state.perm):
            return OrbitRun(tuple(steps), "reducible")
    return OrbitRun(tuple(steps), "max_steps")
