"""Exchange maps on an interval or circle: evaluation, orbits, first-return
maps, exact periodic-point certificates, and the flip-image iteration for
three-interval circle maps.

A map is stored as (lengths, signed permutation); domain breakpoints are the
running sums of the lengths and range breakpoints the running sums in image
order.  Circle maps carry the same data plus an identification flag for the
two endpoints; evaluation and gap statistics wrap modulo the total length.
Breakpoints are excluded from the domain, and orbit iteration treats landing
on one as a terminal event.

Two backends share the code: exact (ints / fractions, used for certificates)
and float (used for Perron-eigenvector data), with point equality at absolute
tolerance FLOAT_POINT_TOL in the float case.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .perm import SignedPermutation

__all__ = [
    "ExchangeMap",
    "OrbitReport",
    "PeriodicCertificate",
    "ImageIterationReport",
    "BreakpointError",
    "ReturnBudgetError",
    "orbit",
    "first_return_map",
    "find_periodic_point",
    "verify_certificate",
    "interval_image_iteration",
    "circle_arcs",
    "interval_arcs",
    "circle_profile",
]

FLOAT_POINT_TOL = 1e-12


class BreakpointError(ValueError):
    """The point sits on a breakpoint, outside the map's domain."""


class ReturnBudgetError(RuntimeError):
    """A piece failed to return to the induction interval within budget."""


def _is_exact(values: Iterable) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _halfway(a, b):
    if isinstance(a, float) or isinstance(b, float):
        return (a + b) / 2
    return Fraction(a + b, 2)


@dataclass(frozen=True)
class ExchangeMap:
    """An interval or circle exchange transformation."""

    space: str  # 'interval' | 'circle'
    lengths: tuple
    perm: SignedPermutation

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(self.lengths))
        if self.space not in ("interval", "circle"):
            raise ValueError(f"unknown space {self.space!r}")
        if len(self.lengths) != self.perm.n:
            raise ValueError(
                f"{len(self.lengths)} lengths for {self.perm.n} symbols"
            )
        if any(v <= 0 for v in self.lengths):
            raise ValueError("lengths must be strictly positive")

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def total(self):
        return sum(self.lengths)

    @property
    def backend(self) -> str:
        return "exact" if _is_exact(self.lengths) else "float"

    @property
    def domain_breakpoints(self) -> tuple:
        """a_0 = 0 < a_1 < ... < a_n = total."""
        cached = self.__dict__.get("_domain_breakpoints")
        if cached is None:
            acc = 0 * self.lengths[0]
            cached = [acc]
            for v in self.lengths:
                acc = acc + v
                cached.append(acc)
            cached = tuple(cached)
            self.__dict__["_domain_breakpoints"] = cached
        return cached

    @property
    def range_breakpoints(self) -> tuple:
        """b_0 = 0 < b_1 < ... < b_n = total, in image order."""
        cached = self.__dict__.get("_range_breakpoints")
        if cached is None:
            acc = 0 * self.lengths[0]
            out = [acc]
            for j in range(1, self.n + 1):
                acc = acc + self.lengths[self.perm.position_of(j) - 1]
                out.append(acc)
            cached = tuple(out)
            self.__dict__["_range_breakpoints"] = cached
        return cached

    def _point_tol(self):
        return FLOAT_POINT_TOL if self.backend == "float" else 0

    def interval_of(self, x) -> int:
        """1-based index i with x strictly inside the i-th domain interval."""
        breaks = self.domain_breakpoints
        if self.space == "circle":
            x = x % self.total
        if not (0 <= x <= self.total):
            raise ValueError(f"point {x} outside [0, {self.total}]")
        tol = self._point_tol()
        i = bisect.bisect_right(breaks, x)
        # bisect gives the first breakpoint strictly greater than x
        if i == 0 or i > self.n:
            raise BreakpointError(f"{x} is a breakpoint")
        if x - breaks[i - 1] <= tol or breaks[i] - x <= tol:
            raise BreakpointError(f"{x} is (numerically) a breakpoint")
        return i

    def evaluate(self, x):
        """Image of x; raises BreakpointError when x is not in the domain."""
        if self.space == "circle":
            x = x % self.total
        i = self.interval_of(x)
        a = self.domain_breakpoints
        b = self.range_breakpoints
        j = self.perm.pi[i - 1]
        if self.perm.theta[i - 1] == 1:
            return b[j - 1] + (x - a[i - 1])
        return b[j] - (x - a[i - 1])

    __call__ = evaluate

    def evaluate_inverse(self, y):
        """Preimage of y; raises BreakpointError on range breakpoints."""
        if self.space == "circle":
            y = y % self.total
        breaks = self.range_breakpoints
        if not (0 <= y <= self.total):
            raise ValueError(f"point {y} outside [0, {self.total}]")
        tol = self._point_tol()
        j = bisect.bisect_right(breaks, y)
        if j == 0 or j > self.n:
            raise BreakpointError(f"{y} is a range breakpoint")
        if y - breaks[j - 1] <= tol or breaks[j] - y <= tol:
            raise BreakpointError(f"{y} is (numerically) a range breakpoint")
        i = self.perm.position_of(j)
        a = self.domain_breakpoints
        if self.perm.theta[i - 1] == 1:
            return a[i - 1] + (y - breaks[j - 1])
        return a[i - 1] + (breaks[j] - y)

    def pieces(self) -> tuple:
        """Continuity pieces (s, e, eps, c) with T(x) = eps*x + c on (s, e)."""
        a = self.domain_breakpoints
        b = self.range_breakpoints
        out = []
        for i in range(1, self.n + 1):
            j = self.perm.pi[i - 1]
            if self.perm.theta[i - 1] == 1:
                out.append((a[i - 1], a[i], 1, b[j - 1] - a[i - 1]))
            else:
                out.append((a[i - 1], a[i], -1, b[j] + a[i - 1]))
        return tuple(out)

    def to_json(self) -> dict:
        from .serialize import map_to_json

        return map_to_json(self)


@dataclass(frozen=True)
class OrbitReport:
    """Forward orbit sample: the visited points, why iteration stopped, and
    the largest gap between consecutive sorted points (wrapping around for
    circle maps)."""

    points: tuple
    stopped_reason: str  # 'budget' | 'hit_breakpoint'
    max_gap: object


def orbit(t: ExchangeMap, x0, n: int) -> OrbitReport:
    pts = [x0]
    x = x0
    reason = "budget"
    for _ in range(n):
        try:
            x = t.evaluate(x)
        except BreakpointError:
            reason = "hit_breakpoint"
            break
        pts.append(x)
    sorted_pts = sorted(pts)
    gaps = [b - a for a, b in zip(sorted_pts, sorted_pts[1:])]
    if t.space == "circle":
        gaps.append(sorted_pts[0] + t.total - sorted_pts[-1])
    max_gap = max(gaps) if gaps else t.total
    return OrbitReport(tuple(pts), reason, max_gap)


def _compose_piece(t: ExchangeMap, s, e, eps, c, interval_index: int):
    """Compose the affine piece eps*x + c with the branch of t on the given
    domain interval (1-based)."""
    a = t.domain_breakpoints
    b = t.range_breakpoints
    i = interval_index
    j = t.perm.pi[i - 1]
    if t.perm.theta[i - 1] == 1:
        return s, e, eps, c + (b[j - 1] - a[i - 1])
    return s, e, -eps, (b[j] + a[i - 1]) - c


def _advance_pieces(t: ExchangeMap, pieces: Sequence[tuple]) -> list[tuple]:
    """One more application of t on a list of (s, e, eps, c) pieces, splitting
    sources wherever the image crosses a breakpoint of t."""
    breaks = t.domain_breakpoints
    tol = t._point_tol()
    out: list[tuple] = []
    for s, e, eps, c in pieces:
        iu, iv = (eps * s + c, eps * e + c)
        u, v = (iu, iv) if iu <= iv else (iv, iu)
        lo = bisect.bisect_right(breaks, u)
        hi = bisect.bisect_left(breaks, v)
        inner = [bp for bp in breaks[lo:hi] if u + tol < bp < v - tol]
        cuts = sorted(eps * (bp - c) for bp in inner)
        xs = [s] + cuts + [e]
        for s2, e2 in zip(xs, xs[1:]):
            if s2 >= e2:
                continue
            mid = eps * _halfway(s2, e2) + c
            idx = bisect.bisect_right(breaks, mid)
            out.append(_compose_piece(t, s2, e2, eps, c, idx))
    return out


def first_return_map(t: ExchangeMap, nu, max_return_time: int = 10_000) -> ExchangeMap:
    """The exchange map induced by t on [0, nu] by first return.

    Follows the continuity pieces of [0, nu) forward, splitting at the
    breakpoints of t and at nu, until every piece lands back inside [0, nu).
    """
    total = t.total
    if not 0 < nu <= total:
        raise ValueError(f"induction endpoint {nu} outside (0, {total}]")
    tol = FLOAT_POINT_TOL * float(total) if t.backend == "float" else 0
    breaks = t.domain_breakpoints
    zero = 0 * nu
    pending: list[tuple] = [(zero, nu, 1, zero, 0)]
    done: list[tuple] = []
    while pending:
        s, e, eps, c, m = pending.pop()
        if s >= e:
            continue
        iu, iv = (eps * s + c, eps * e + c)
        u, v = (iu, iv) if iu <= iv else (iv, iu)
        if m >= 1 and v <= nu + tol:
            done.append((s, e, eps, c, m))
            continue
        if m >= max_return_time:
            raise ReturnBudgetError(
                f"piece ({s}, {e}) did not return within {max_return_time} steps"
            )
        if u + tol < nu < v - tol:
            cut = eps * (nu - c)
            pending.append((s, cut, eps, c, m))
            pending.append((cut, e, eps, c, m))
            continue
        lo = bisect.bisect_right(breaks, u)
        hi = bisect.bisect_left(breaks, v)
        inner = [bp for bp in breaks[lo:hi] if u + tol < bp < v - tol]
        cuts = sorted(eps * (bp - c) for bp in inner)
        xs = [s] + cuts + [e]
        for s2, e2 in zip(xs, xs[1:]):
            if s2 >= e2:
                continue
            mid = eps * _halfway(s2, e2) + c
            idx = bisect.bisect_right(breaks, mid)
            s3, e3, eps3, c3 = _compose_piece(t, s2, e2, eps, c, idx)
            pending.append((s3, e3, eps3, c3, m + 1))
    done.sort(key=lambda piece: piece[0])
    lengths = tuple(e - s for s, e, *_ in done)
    starts = [min(eps * s + c, eps * e + c) for s, e, eps, c, _ in done]
    rank = {u: j for j, u in enumerate(sorted(starts), start=1)}
    signed = tuple(
        eps * rank[u] for (_, _, eps, _, _), u in zip(done, starts)
    )
    return ExchangeMap("interval", lengths, SignedPermutation(signed))


@dataclass(frozen=True)
class PeriodicCertificate:
    """Exact evidence of a periodic locus.

    kind 'interval': every point of the open interval ``locus`` is fixed by
    T^period with orientation +1.  kind 'flipped_point': ``locus`` is the
    single fixed point of an orientation-reversing branch of T^period.
    """

    kind: str  # 'interval' | 'flipped_point'
    locus: object
    period: int
    orientation: int


def find_periodic_point(
    t: ExchangeMap, max_period: int = 10_000
) -> PeriodicCertificate | None:
    """Scan T, T^2, ... T^max_period for a fixed locus, exactly.

    The continuity partition of T^k is refined one application at a time;
    a slope +1 piece with zero offset is an interval of periodic points, a
    slope -1 piece with its reflection point inside is a flipped periodic
    point.  Requires the exact backend.
    """
    if t.backend != "float":
        pass
    else:
        raise ValueError("periodic certificates require the exact backend")
    pieces = list(t.pieces())
    for k in range(1, max_period + 1):
        if k > 1:
            pieces = _advance_pieces(t, pieces)
        for s, e, eps, c, in pieces:
            if eps == 1 and c == 0:
                return PeriodicCertificate("interval", (s, e), k, 1)
            if eps == -1 and 2 * s < c < 2 * e:
                point = c // 2 if isinstance(c, int) and c % 2 == 0 else Fraction(c, 2)
                return PeriodicCertificate("flipped_point", point, k, -1)
    return None


def verify_certificate(t: ExchangeMap, cert: PeriodicCertificate) -> bool:
    """Re-evaluate T^period on the certified locus, exactly."""
    if cert.kind == "interval":
        s, e = cert.locus
        probes = [s + Fraction(e - s) * Fraction(num, 4) for num in (1, 2, 3)]
    else:
        probes = [cert.locus]
    for x in probes:
        y = x
        for _ in range(cert.period):
            y = t.evaluate(y)
        if y != x:
            return False
    return True


@dataclass(frozen=True)
class ImageIterationReport:
    """Forward images of the flip interval of a three-interval circle map
    with one flip, up to their first overlap with the flip interval.

    ``images[k]`` lists the interval pieces of the k-th image; ``hit_index``
    is the step whose image contains the far breakpoint (None if none does);
    ``split`` carries the point d of the flip interval that lands on the far
    breakpoint together with the two resulting halves.
    """

    overlap_step: int
    images: tuple
    hit_index: int | None
    split: tuple | None
    disjoint: bool


def circle_arcs(t: ExchangeMap) -> list[tuple[list[int], int]]:
    """Maximal continuity arcs of the map seen on the circle.

    Each arc is (member interval indices in cyclic order, orientation).
    Two neighbours merge when the one-sided limits agree modulo the total
    length and the orientations match.
    """
    n = t.n
    a = t.domain_breakpoints
    b = t.range_breakpoints
    pi, th = t.perm.pi, t.perm.theta
    total = t.total
    tol = FLOAT_POINT_TOL * float(total) if t.backend == "float" else 0

    def left_limit(i: int):  # x -> a_i from inside interval i
        return b[pi[i - 1]] - t.lengths[i - 1] if th[i - 1] == -1 else b[pi[i - 1]]

    def right_limit(i: int):  # x -> a_{i-1} from inside interval i
        return b[pi[i - 1]] if th[i - 1] == -1 else b[pi[i - 1] - 1]

    def glued(i: int, j: int) -> bool:
        # continuity across the breakpoint between interval i and interval j
        if th[i - 1] != th[j - 1]:
            return False
        diff = (left_limit(i) - right_limit(j)) % total
        return diff <= tol or total - diff <= tol

    merged_next = [glued(i, i % n + 1) for i in range(1, n + 1)]
    if all(merged_next):
        # continuous everywhere: a rotation or reflection, one arc
        return [(list(range(1, n + 1)), th[0])]
    start = next(i for i in range(1, n + 1) if not merged_next[i - 1]) % n + 1
    arcs = []
    current = [start]
    i = start
    for _ in range(n - 1):
        j = i % n + 1
        if merged_next[i - 1]:
            current.append(j)
        else:
            arcs.append((current, th[current[0] - 1]))
            current = [j]
        i = j
    arcs.append((current, th[current[0] - 1]))
    return arcs


def interval_arcs(t: ExchangeMap) -> list[tuple[list[int], int]]:
    """Maximal continuity arcs of the map seen on the interval (no wrap)."""
    n = t.n
    b = t.range_breakpoints
    pi, th = t.perm.pi, t.perm.theta
    tol = FLOAT_POINT_TOL * float(t.total) if t.backend == "float" else 0

    def left_limit(i: int):
        return b[pi[i - 1]] - t.lengths[i - 1] if th[i - 1] == -1 else b[pi[i - 1]]

    def right_limit(i: int):
        return b[pi[i - 1]] if th[i - 1] == -1 else b[pi[i - 1] - 1]

    arcs = [([1], th[0])]
    for i in range(1, n):
        if th[i - 1] == th[i] and abs(left_limit(i) - right_limit(i + 1)) <= tol:
            arcs[-1][0].append(i + 1)
        else:
            arcs.append(([i + 1], th[i]))
    return [(members, sign) for members, sign in arcs]


def circle_profile(t: ExchangeMap) -> tuple[int, int]:
    """(interval count, flip count) of the map seen on the circle, after
    merging the arcs that are continuous across breakpoints."""
    arcs = circle_arcs(t)
    return len(arcs), sum(1 for _, sign in arcs if sign == -1)


def interval_image_iteration(t: ExchangeMap) -> ImageIterationReport:
    """Iterate the forward images of the flip interval of a (3,1) circle
    exchange until one overlaps the flip interval.

    Pieces are tracked as affine images of sub-intervals of the flip
    interval, so a breakpoint landing inside an image pins down the exact
    source point d.  Verifies that all earlier images are pairwise disjoint.
    """
    if t.space != "circle" or t.n != 3 or t.perm.flips() != 1:
        raise ValueError("expected a circle exchange on 3 intervals with one flip")
    n_eff, f_eff = circle_profile(t)
    if (n_eff, f_eff) != (3, 1):
        raise ValueError(
            f"map degenerates to a ({n_eff},{f_eff}) circle exchange"
        )
    flip = next(i for i in range(1, 4) if t.perm.theta[i - 1] == -1)
    a = t.domain_breakpoints
    flip_lo, flip_hi = a[flip - 1], a[flip]
    far = a[flip % 3 + 1 - 1] if flip != 2 else a[0]
    # the circle breakpoints are a_0, a_1, a_2; 'far' is the one that is not
    # an endpoint of the flip interval
    far_candidates = [a[0], a[1], a[2]]
    far = next(bp for bp in far_candidates if bp not in (flip_lo, flip_hi % t.total))

    def overlaps_flip(u, v) -> bool:
        return u < flip_hi and v > flip_lo

    pieces = [(flip_lo, flip_hi, 1, 0 * flip_lo)]  # T^0 restricted to the flip interval
    all_images = [tuple((flip_lo, flip_hi),)]
    images_per_step = [((flip_lo, flip_hi),)]
    previous: list[tuple] = [(flip_lo, flip_hi)]
    hit_index = None
    split = None
    disjoint = True
    limit = int(float(t.total) / float(t.lengths[flip - 1])) + 2
    for step in range(1, limit + 1):
        pieces = _advance_pieces(t, pieces)
        image_now = []
        for s, e, eps, c in pieces:
            iu, iv = eps * s + c, eps * e + c
            image_now.append((min(iu, iv), max(iu, iv)))
        image_now.sort()
        images_per_step.append(tuple(image_now))
        if any(overlaps_flip(u, v) for u, v in image_now):
            return ImageIterationReport(
                step, tuple(images_per_step), hit_index, split, disjoint
            )
        for u, v in image_now:
            for pu, pv in previous:
                if u < pv and v > pu:
                    disjoint = False
        previous.extend(image_now)
        # a breakpoint strictly inside an image splits the source at d
        for s, e, eps, c in pieces:
            iu, iv = eps * s + c, eps * e + c
            u, v = min(iu, iv), max(iu, iv)
            if u < far < v:
                d = eps * (far - c)
                if hit_index is None:
                    hit_index = step
                    split = (d, (flip_lo, d), (d, flip_hi))
    raise RuntimeError("no overlap within the measure-theoretic bound")
