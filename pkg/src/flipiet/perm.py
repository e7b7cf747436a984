"""Signed permutations on {1..n} and the two induction transition maps.

A signed permutation stores, for each domain slot i, a target slot pi(i)
together with an orientation sign theta_i (+1 preserves orientation, -1
reverses it).  The canonical external form is the tuple of nonzero signed
integers (theta_1*pi_1, ..., theta_n*pi_n), printed as ``(-3,+4,+1,-2)``.
All external indices are 1-based.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "SignedPermutation",
    "FakeDiscontinuity",
    "FakeAmbiguity",
    "is_irreducible",
    "transition_a",
    "transition_b",
    "apply_type",
    "fake_discontinuity_matches",
    "classify_fake_discontinuity",
    "all_signed_permutations",
    "irreducible_signed_permutations",
]


@dataclass(frozen=True)
class SignedPermutation:
    """Immutable signed permutation, stored in its external signed form."""

    signed: tuple[int, ...]

    def __post_init__(self) -> None:
        sig = tuple(int(v) for v in self.signed)
        object.__setattr__(self, "signed", sig)
        n = len(sig)
        if n < 1:
            raise ValueError("signed permutation needs at least one symbol")
        if sorted(abs(v) for v in sig) != list(range(1, n + 1)):
            raise ValueError(f"not a signed permutation: {sig!r}")

    @classmethod
    def parse(cls, text: str) -> "SignedPermutation":
        """Parse the printed form ``(-3,+4,+1,-2)``; the '+' is optional."""
        tokens = re.findall(r"[+-]?\d+", text)
        if not tokens:
            raise ValueError(f"cannot parse signed permutation from {text!r}")
        return cls(tuple(int(t) for t in tokens))

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "SignedPermutation":
        return cls(tuple(int(v) for v in values))

    @cached_property
    def n(self) -> int:
        return len(self.signed)

    @cached_property
    def pi(self) -> tuple[int, ...]:
        """Underlying unsigned permutation, as the tuple (pi(1),...,pi(n))."""
        return tuple(abs(v) for v in self.signed)

    @cached_property
    def theta(self) -> tuple[int, ...]:
        """Orientation signs, +1 or -1 per domain slot."""
        return tuple(1 if v > 0 else -1 for v in self.signed)

    @cached_property
    def _positions(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(self.pi, start=1):
            pos[v - 1] = i
        return tuple(pos)

    def position_of(self, value: int) -> int:
        """1-based slot i with pi(i) == value."""
        return self._positions[value - 1]

    def flips(self) -> int:
        """Number of orientation-reversing slots."""
        return sum(1 for v in self.signed if v < 0)

    def is_irreducible(self) -> bool:
        return is_irreducible(self)

    def format(self) -> str:
        return "(" + ",".join(f"{v:+d}" for v in self.signed) + ")"

    def to_json(self) -> list[int]:
        return list(self.signed)

    def __str__(self) -> str:
        return self.format()


def is_irreducible(p: SignedPermutation) -> bool:
    """True iff no proper prefix {1..k}, k < n, is invariant under pi.

    Signs play no role: a signed permutation is irreducible exactly when
    its unsigned part is.
    """
    running_max = 0
    for k, v in enumerate(p.pi[:-1], start=1):
        running_max = max(running_max, v)
        if running_max == k:
            return False
    return True


def transition_a(p: SignedPermutation) -> SignedPermutation:
    """Type-a transition: the combinatorics after cutting the shorter of
    the two rightmost intervals when that interval is the last range slot.

    Total on all signed permutations; the case split is on the sign of the
    last domain slot.
    """
    pi, th, n = p.pi, p.theta, p.n
    pin = pi[-1]
    out = [0] * n
    if th[-1] == 1:
        for i in range(n):
            if pi[i] <= pin:
                out[i] = th[i] * pi[i]
            elif pi[i] == n:
                out[i] = th[i] * (pin + 1)
            else:
                out[i] = th[i] * (pi[i] + 1)
    else:
        for i in range(n):
            if pi[i] <= pin - 1:
                out[i] = th[i] * pi[i]
            elif pi[i] == n:
                out[i] = -th[i] * pin
            else:
                out[i] = th[i] * (pi[i] + 1)
    return SignedPermutation(tuple(out))


def transition_b(p: SignedPermutation) -> SignedPermutation:
    """Type-b transition: the combinatorics after cutting the shorter of
    the two rightmost intervals when that interval is the last domain one.

    The signed entry of the last slot is reinserted just after (sign +1)
    or in place of (sign -1, with a flip) the slot sent to n; the case
    split is on the sign of that slot.
    """
    n = p.n
    k = p.position_of(n)  # 1-based slot with pi(k) == n
    entries = list(p.signed)
    if p.theta[k - 1] == 1:
        new = entries[:k] + [entries[-1]] + entries[k : n - 1]
    else:
        new = entries[: k - 1] + [-entries[-1]] + entries[k - 1 : n - 1]
    return SignedPermutation(tuple(new))


def apply_type(p: SignedPermutation, t: str) -> SignedPermutation:
    if t == "a":
        return transition_a(p)
    if t == "b":
        return transition_b(p)
    raise ValueError(f"unknown transition type {t!r}")


@dataclass(frozen=True)
class FakeDiscontinuity:
    """A breakpoint of an interval exchange that disappears when the
    interval's endpoints are glued into a circle.

    ``case`` is one of 'a'..'d'; ``index`` is the 1-based domain slot i for
    the interior cases (a)/(b), and n for the wrap-around cases (c)/(d).
    """

    case: str
    index: int


@dataclass(frozen=True)
class FakeAmbiguity:
    """Diagnostic value: two or more fake-discontinuity cases match, so the
    'precisely one case' requirement of the definition is violated."""

    matches: tuple[FakeDiscontinuity, ...]


def fake_discontinuity_matches(p: SignedPermutation) -> tuple[FakeDiscontinuity, ...]:
    """All case patterns matching p, in case order (a), (b), (c), (d).

    Interior cases: slots i, i+1 carry the extreme values (n,1) with both
    signs +1, or (1,n) with both signs -1.  Wrap cases compare the first
    and last slot values, +1 signs for pi(1) = pi(n)+1 and -1 signs for
    pi(1) = pi(n)-1.
    """
    pi, th, n = p.pi, p.theta, p.n
    if n < 2:
        raise ValueError("fake-discontinuity classification needs n >= 2")
    found = []
    for i in range(1, n):  # interior breakpoint between slots i and i+1
        if pi[i - 1] == n and pi[i] == 1 and th[i - 1] == 1 and th[i] == 1:
            found.append(FakeDiscontinuity("a", i))
        if pi[i - 1] == 1 and pi[i] == n and th[i - 1] == -1 and th[i] == -1:
            found.append(FakeDiscontinuity("b", i))
    if pi[0] == pi[-1] + 1 and th[0] == 1 and th[-1] == 1:
        found.append(FakeDiscontinuity("c", n))
    if pi[0] == pi[-1] - 1 and th[0] == -1 and th[-1] == -1:
        found.append(FakeDiscontinuity("d", n))
    return tuple(found)


def classify_fake_discontinuity(
    p: SignedPermutation,
) -> FakeDiscontinuity | FakeAmbiguity | None:
    """None if no case matches, the single match if exactly one does, and a
    FakeAmbiguity diagnostic if several do."""
    matches = fake_discontinuity_matches(p)
    if not matches:
        return None
    if len(matches) == 1:
        return matches[0]
    return FakeAmbiguity(matches)


def all_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    """All 2^n * n! signed permutations on n symbols, in a fixed order."""
    for pi in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(tuple(s * v for s, v in zip(signs, pi)))


def irreducible_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    for p in all_signed_permutations(n):
        if is_irreducible(p):
            yield p
