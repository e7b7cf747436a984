"""Exact integer matrix algebra for induction paths.

Matrices are tuples of tuples of plain Python ints, so products of long
paths never overflow.  The module also provides the primitivity test
(boolean powers up to the Wielandt bound) and the dominant eigenpair of a
primitive matrix by power iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .perm import SignedPermutation

__all__ = [
    "IntMatrix",
    "PerronPair",
    "identity",
    "matrix_a",
    "matrix_b",
    "transition_matrix",
    "mat_mul",
    "mat_vec",
    "det",
    "unimodular_inverse",
    "wielandt_bound",
    "is_eventually_positive",
    "perron_eigenpair",
    "path_product",
]

IntMatrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matrix_a(p: SignedPermutation) -> IntMatrix:
    """Identity plus a single 1 in row n at the column of the slot sent to n.

    When pi(n) == n the extra 1 lands on the diagonal, giving entry 2.
    """
    n = p.n
    k = p.position_of(n)
    rows = [list(r) for r in identity(n)]
    rows[n - 1][k - 1] += 1
    return tuple(tuple(r) for r in rows)


def matrix_b(p: SignedPermutation) -> IntMatrix:
    """Type-b transition matrix.

    With k the slot sent to n: rows 1..k keep their diagonal 1, rows k..n-1
    also pick up a 1 on the superdiagonal, and row n has a single 1 in
    column k (sign of slot k negative) or k+1 (positive).  Undefined when
    pi(n) == n: that column index would be n+1, and a type-b induction step
    never arises there because the two competing lengths coincide.
    """
    n = p.n
    k = p.position_of(n)
    if k == n:
        raise ValueError("type-b matrix undefined when pi(n) == n")
    s = k + (1 + p.theta[k - 1]) // 2
    rows = [[0] * n for _ in range(n)]
    for i in range(1, k + 1):
        rows[i - 1][i - 1] += 1
    rows[n - 1][s - 1] += 1
    for i in range(k, n):
        rows[i - 1][i] += 1
    return tuple(tuple(r) for r in rows)


def transition_matrix(p: SignedPermutation, t: str) -> IntMatrix:
    if t == "a":
        return matrix_a(p)
    if t == "b":
        return matrix_b(p)
    raise ValueError(f"unknown transition type {t!r}")


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +-1.

    The result may have negative entries; it is a helper for pulling length
    vectors back along a path, not a transition matrix itself.
    """
    n = len(a)
    d = det(a)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det={d})")
    work = [[Fraction(x) for x in row] + [Fraction(i == j) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col] != 0)
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    inv = tuple(tuple(int(x) for x in row[n:]) for row in work)
    return inv


def wielandt_bound(n: int) -> int:
    """Maximal primitivity exponent of an n x n primitive matrix."""
    return n * n - 2 * n + 2


def is_eventually_positive(a: IntMatrix) -> tuple[bool, int | None]:
    """Whether some power of the nonnegative matrix a is entrywise positive,
    together with the least such exponent.

    Powers are taken over the boolean semiring (zero pattern only), so the
    answer is exact regardless of entry growth; scanning up to the Wielandt
    bound is complete.
    """
    n = len(a)
    if any(x < 0 for row in a for x in row):
        raise ValueError("matrix has a negative entry")
    base = [sum(1 << j for j, x in enumerate(row) if x) for row in a]
    full = (1 << n) - 1
    power = base[:]
    for k in range(1, wielandt_bound(n) + 1):
        if k > 1:
            nxt = []
            for bits in power:
                acc = 0
                b = bits
                while b:
                    j = (b & -b).bit_length() - 1
                    acc |= base[j]
                    b &= b - 1
                nxt.append(acc)
            power = nxt
        if all(bits == full for bits in power):
            return True, k
    return False, None


@dataclass(frozen=True)
class PerronPair:
    """Dominant eigenvalue sigma and eigenvector (normalised to sum 1) of a
    primitive nonnegative matrix, with the max-norm residual |A v - sigma v|."""

    sigma: float
    vector: tuple[float, ...]
    residual: float


def perron_eigenpair(
    a: IntMatrix, tolerance: float = 1e-14, max_iterations: int = 100_000
) -> PerronPair:
    """Power iteration on a primitive matrix.

    Converges when successive sum-normalised iterates differ by less than
    ``tolerance`` in max norm; the dominant eigenvalue is simple for a
    primitive matrix so this terminates quickly at these sizes.
    """
    primitive, _ = is_eventually_positive(a)
    if not primitive:
        raise ValueError("matrix is not primitive; no dominant positive eigenpair")
    n = len(a)
    x = [1.0 / n] * n
    for _ in range(max_iterations):
        y = [float(sum(r * v for r, v in zip(row, x))) for row in a]
        s = sum(y)
        y = [v / s for v in y]
        if max(abs(u - v) for u, v in zip(x, y)) < tolerance:
            x = y
            break
        x = y
    else:
        raise RuntimeError("power iteration did not converge")
    ax = [float(sum(r * v for r, v in zip(row, x))) for row in a]
    sigma = sum(ax)
    residual = max(abs(u - sigma * v) for u, v in zip(ax, x))
    if any(v <= 0 for v in x):
        raise RuntimeError("dominant eigenvector is not strictly positive")
    return PerronPair(sigma=sigma, vector=tuple(x), residual=residual)


def path_product(path, i: int | None = None) -> IntMatrix:
    """Ordered product of the transition matrices along the first i steps
    of a path (all steps when i is None).

    ``path`` needs ``vertices`` and ``types`` attributes; the product is
    M_{t_1}(p0) * M_{t_2}(p1) * ... left to right.
    """
    vertices = path.vertices
    types = path.types
    if i is None:
        i = len(types)
    if not 1 <= i <= len(types):
        raise IndexError(f"step index {i} outside 1..{len(types)}")
    acc = transition_matrix(vertices[0], types[0])
    for j in range(1, i):
        acc = mat_mul(acc, transition_matrix(vertices[j], types[j]))
    return acc
