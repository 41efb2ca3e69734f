"""
Permutations of {1, ..., k} in one-line notation.

A permutation is a tuple ``w`` of the integers 1..k, where ``w[i-1]`` is the
image of ``i``.  All functions treat permutations as immutable values; nothing
here keeps state, so everything is safe for parallel use.

Bruhat order is decided through rank matrices: ``r_w(i, j)`` counts the
entries among the first ``i`` positions whose value is at most ``j``, and
``x <= w`` holds exactly when ``r_w <= r_x`` entrywise.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

Perm = tuple[int, ...]

#: patterns whose joint avoidance characterizes smooth one-line words
SINGULAR_PATTERNS: tuple[Perm, Perm] = ((4, 2, 3, 1), (3, 4, 1, 2))


def is_permutation(word: Sequence[int]) -> bool:
    """True iff ``word`` is a rearrangement of 1..len(word)."""
    return sorted(word) == list(range(1, len(word) + 1))


def check_permutation(word: Sequence[int]) -> Perm:
    """Return ``word`` as a tuple, raising ValueError if it is not a permutation."""
    w = tuple(word)
    if not is_permutation(w):
        raise ValueError(f"not a permutation of 1..{len(w)}: {w!r}")
    return w


def identity(k: int) -> Perm:
    return tuple(range(1, k + 1))


def longest_element(k: int) -> Perm:
    return tuple(range(k, 0, -1))


def inverse(w: Perm) -> Perm:
    inv = [0] * len(w)
    for i, v in enumerate(w):
        inv[v - 1] = i + 1
    return tuple(inv)


def compose(u: Perm, v: Perm) -> Perm:
    """(u * v)(i) = u(v(i))."""
    return tuple(u[x - 1] for x in v)


def length(w: Perm) -> int:
    """Number of inversions #{i < j : w(i) > w(j)}."""
    return sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])


def sign(w: Perm) -> int:
    return -1 if length(w) % 2 else 1


def ascent_set(w: Perm) -> frozenset[int]:
    """{i < k : w(i) < w(i+1)} together with k."""
    k = len(w)
    return frozenset(i for i in range(1, k) if w[i - 1] < w[i]) | {k}


def rank_matrix(w: Perm) -> tuple[tuple[int, ...], ...]:
    """r_w(i, j) = #{u <= i : w(u) <= j}, as a k x k tuple of tuples."""
    k = len(w)
    rows = []
    prev = (0,) * k
    for i in range(k):
        row = list(prev)
        for j in range(w[i] - 1, k):
            row[j] += 1
        prev = tuple(row)
        rows.append(prev)
    return tuple(rows)


def bruhat_leq(t: Perm, s: Perm) -> bool:
    """True iff t <= s in Bruhat order (r_s <= r_t entrywise)."""
    if len(t) != len(s):
        raise ValueError("permutations live in different symmetric groups")
    rt = rank_matrix(t)
    rs = rank_matrix(s)
    return all(rs[i][j] <= rt[i][j] for i in range(len(t)) for j in range(len(t)))


def transpositions(k: int) -> Iterator[tuple[int, int]]:
    """All pairs (i, j) with 1 <= i < j <= k, naming the transposition t_{i,j}."""
    return itertools.combinations(range(1, k + 1), 2)


def apply_transposition(w: Perm, i: int, j: int) -> Perm:
    """Right multiplication w * t_{i,j}: swaps the entries at positions i, j."""
    word = list(w)
    word[i - 1], word[j - 1] = word[j - 1], word[i - 1]
    return tuple(word)


class SmoothPairData(NamedTuple):
    j_count: int
    i_count: int
    is_smooth: bool


def smooth_pair_data(sigma0: Perm, sigma: Perm) -> SmoothPairData:
    """
    Tangent-space count for the cell of ``sigma0`` inside the closure for
    ``sigma``: j_count = #{t : sigma0*t <= sigma}, i_count restricts to
    sigma0*t >= sigma0, and the pair is smooth iff j_count == length(sigma).

    Requires sigma0 <= sigma.
    """
    if not bruhat_leq(sigma0, sigma):
        raise ValueError("smooth_pair_data requires sigma0 <= sigma")
    j_count = 0
    i_count = 0
    for i, j in transpositions(len(sigma)):
        t = apply_transposition(sigma0, i, j)
        if bruhat_leq(t, sigma):
            j_count += 1
            if sigma0[i - 1] < sigma0[j - 1]:  # sigma0*t > sigma0
                i_count += 1
    return SmoothPairData(j_count, i_count, j_count == length(sigma))


def pattern_of(values: Sequence[int]) -> Perm:
    """Standardize ``values`` to a permutation of 1..len(values)."""
    order = sorted(values)
    return tuple(order.index(v) + 1 for v in values)


def avoids_patterns(w: Perm, patterns: Iterable[Perm]) -> bool:
    """True iff no index subset of w is order-isomorphic to any pattern."""
    pats = [tuple(p) for p in patterns]
    for p in pats:
        lp = len(p)
        for positions in itertools.combinations(range(len(w)), lp):
            if pattern_of([w[i] for i in positions]) == p:
                return False
    return True


def is_smooth(w: Perm) -> bool:
    """Smoothness of the full closure: avoidance of 4231 and 3412."""
    return avoids_patterns(w, SINGULAR_PATTERNS)


def is_213_avoiding(w: Perm) -> bool:
    return avoids_patterns(w, ((2, 1, 3),))


def flatten(w: Perm, positions: Iterable[int]) -> Perm:
    """
    Remove the entries (i, w(i)) for i in ``positions`` (1-based) and
    standardize what remains.
    """
    drop = set(positions)
    kept = [w[i] for i in range(len(w)) if i + 1 not in drop]
    return pattern_of(kept)


def inflate(w: Perm, m: int) -> Perm:
    """
    Blow up each entry into a block of m consecutive entries: the result v in
    S_{m*k} has v(m*(i-1)+j) = m*(w(i)-1)+j for j = 1..m.
    """
    out = []
    for v in w:
        out.extend(range(m * (v - 1) + 1, m * v + 1))
    return tuple(out)


def tau_delta(r: int, s: int, t: int) -> tuple[Perm, Perm]:
    """
    The interval-pattern pairs in S_{r+s} whose Bruhat intervals carry the
    singularities of type-A closures; t selects one of the three shapes
    (s must be 2 when t = 3).
    """
    if r < 2 or s < 2 or t not in (1, 2, 3):
        raise ValueError(f"invalid parameters (r={r}, s={s}, t={t})")
    if t == 3 and s != 2:
        raise ValueError("shape 3 requires s = 2")
    k = r + s
    if t == 1:
        tau = [0] * k
        delta = [0] * k
        for i in range(1, k + 1):
            if i == 1:
                tau[i - 1] = k
            elif i <= r:
                tau[i - 1] = r + 2 - i
            elif i < k:
                tau[i - 1] = r + k - i
            else:
                tau[i - 1] = 1
            delta[i - 1] = r + 1 - i if i <= r else r + k + 1 - i
    elif t == 2:
        tau = [0] * k
        delta = [0] * k
        for i in range(1, k + 1):
            if i == 1:
                tau[i - 1] = r + 1
            elif i < r:
                tau[i - 1] = r + 1 - i
            elif i == r:
                tau[i - 1] = k
            elif i == r + 1:
                tau[i - 1] = 1
            elif i < k:
                tau[i - 1] = r + k + 1 - i
            else:
                tau[i - 1] = r
            if i < r:
                delta[i - 1] = r - i
            elif i == r:
                delta[i - 1] = r + 1
            elif i == r + 1:
                delta[i - 1] = r
            else:
                delta[i - 1] = r + k + 2 - i
    else:
        tau = [0] * k
        delta = [0] * k
        for i in range(1, k + 1):
            if i == 1:
                tau[i - 1] = r + 1
            elif i == 2:
                tau[i - 1] = k
            elif i <= r:
                tau[i - 1] = k + 1 - i
            elif i == r + 1:
                tau[i - 1] = 1
            else:
                tau[i - 1] = 2
            if i == 1:
                delta[i - 1] = 1
            elif i < k:
                delta[i - 1] = k + 1 - i
            else:
                delta[i - 1] = k
    return check_permutation(tau), check_permutation(delta)


def all_perms(k: int) -> Iterator[Perm]:
    return itertools.permutations(range(1, k + 1))


@lru_cache(maxsize=None)
def sn(k: int) -> tuple[Perm, ...]:
    """All of S_k in lexicographic order (cached)."""
    return tuple(all_perms(k))


@lru_cache(maxsize=8)
def rank_table(k: int):
    """numpy array of shape (k!, k*k) holding every rank matrix, lex order."""
    import numpy as np

    perms = sn(k)
    table = np.empty((len(perms), k * k), dtype=np.uint8)
    for idx, w in enumerate(perms):
        rm = rank_matrix(w)
        table[idx] = [rm[i][j] for i in range(k) for j in range(k)]
    return table


@lru_cache(maxsize=4)
def leq_table(k: int):
    """Boolean matrix L with L[x, w] = (x <= w in Bruhat order), lex indices."""
    import numpy as np

    table = rank_table(k)
    n = table.shape[0]
    out = np.empty((n, n), dtype=bool)
    for w in range(n):
        out[:, w] = (table >= table[w]).all(axis=1)
    return out


def parse_perm(text: str) -> Perm:
    """
    Parse one-line notation: comma-separated like ``4,2,3,1``, or the compact
    digit form ``4231`` when all values fit in one digit.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty permutation")
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
        try:
            word = [int(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"bad permutation entry in {text!r}") from exc
    elif text.isdigit():
        word = [int(c) for c in text]
    else:
        raise ValueError(f"cannot parse permutation {text!r}")
    return check_permutation(word)


def format_perm(w: Perm, compact: bool = False) -> str:
    if compact and len(w) <= 9:
        return "".join(str(v) for v in w)
    return ",".join(str(v) for v in w)
