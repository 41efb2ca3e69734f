"""
Block double cosets, signed Kazhdan-Lusztig sums, and their closed forms.

A permutation of m*k letters, cut into k blocks of m consecutive letters,
determines the k x k matrix counting how blocks meet blocks; the matrix
classifies the double coset under the block-diagonal subgroup H.  For a
smooth pair (sigma, sigma0) with 213-avoiding sigma0, the signed sum of
KL values over each double coset meeting the inflated Bruhat interval has
a closed form: a signed power of two read off the matrix for m = 2, and a
signed count of decompositions into permutation matrices in general.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from . import klpoly as K
from . import perm as P
from .perm import Perm


class CosetMatrix(NamedTuple):
    entries: tuple[tuple[int, ...], ...]
    m: int

    def __str__(self) -> str:
        return "/".join(",".join(str(v) for v in row) for row in self.entries)


def coset_matrix(w: Perm, m: int) -> CosetMatrix:
    """Block-intersection counts of w for blocks of m consecutive letters."""
    if len(w) % m:
        raise ValueError(f"size {len(w)} not divisible by block width {m}")
    k = len(w) // m
    rows = [[0] * k for _ in range(k)]
    for pos, val in enumerate(w):
        rows[pos // m][(val - 1) // m] += 1
    return CosetMatrix(tuple(tuple(r) for r in rows), m)


def all_coset_matrices(k: int, m: int = 2) -> Iterator[CosetMatrix]:
    """All k x k nonnegative matrices with every row and column sum m."""

    def rows_with_budget(budget: list[int]) -> Iterator[tuple[int, ...]]:
        row = [0] * k

        def rec(j: int, remaining: int) -> Iterator[tuple[int, ...]]:
            if j == k:
                if remaining == 0:
                    yield tuple(row)
                return
            top = min(remaining, budget[j])
            for v in range(top, -1, -1):
                row[j] = v
                yield from rec(j + 1, remaining - v)
            row[j] = 0

        yield from rec(0, m)

    def rec_rows(i: int, budget: list[int], acc: list[tuple[int, ...]]) -> Iterator[CosetMatrix]:
        if i == k:
            yield CosetMatrix(tuple(acc), m)
            return
        for row in rows_with_budget(budget):
            nxt = [b - v for b, v in zip(budget, row)]
            acc.append(row)
            yield from rec_rows(i + 1, nxt, acc)
            acc.pop()

    yield from rec_rows(0, [m] * k, [])


def min_rep(M: CosetMatrix) -> Perm:
    """
    The minimal-length permutation with the given block matrix: block
    positions filled increasingly, targets taken in increasing blocks, and
    slots inside each target block handed out first come, first served.
    """
    k = len(M.entries)
    m = M.m
    counters = [0] * k
    word: list[int] = []
    for i in range(k):
        vals = []
        for j in range(k):
            for _ in range(M.entries[i][j]):
                vals.append(m * j + 1 + counters[j])
                counters[j] += 1
        word.extend(sorted(vals))
    return tuple(word)


def iota(sigmas: tuple[Perm, ...]) -> Perm:
    """Interleave m permutations of S_k into S_{mk}, slot j following sigma_j."""
    m = len(sigmas)
    k = len(sigmas[0])
    word = [0] * (m * k)
    for j, s in enumerate(sigmas, start=1):
        if len(s) != k:
            raise ValueError("all factors must have the same size")
        for i in range(1, k + 1):
            word[m * (i - 1) + j - 1] = m * (s[i - 1] - 1) + j
    return tuple(word)


def birkhoff_decompositions(M: CosetMatrix) -> list[tuple[Perm, ...]]:
    """
    All ordered tuples of permutations whose permutation matrices sum to M
    (exhaustive backtracking, peeling one permutation at a time).
    """
    k = len(M.entries)

    def perms_below(rows: list[list[int]]) -> Iterator[Perm]:
        word = [0] * k
        used = [False] * k

        def rec(i: int) -> Iterator[Perm]:
            if i == k:
                yield tuple(word)
                return
            for j in range(k):
                if not used[j] and rows[i][j] > 0:
                    used[j] = True
                    word[i] = j + 1
                    yield from rec(i + 1)
                    used[j] = False

        yield from rec(0)

    out: list[tuple[Perm, ...]] = []

    def peel(rows: list[list[int]], depth: int, acc: list[Perm]) -> None:
        if depth == M.m:
            if all(v == 0 for row in rows for v in row):
                out.append(tuple(acc))
            return
        for s in perms_below(rows):
            for i in range(k):
                rows[i][s[i] - 1] -= 1
            acc.append(s)
            peel(rows, depth + 1, acc)
            acc.pop()
            for i in range(k):
                rows[i][s[i] - 1] += 1

    peel([list(r) for r in M.entries], 0, [])
    return out


def _row_classes(M: CosetMatrix) -> list[set[int]]:
    """Classes of the relation generated by sharing a column with entry 1."""
    k = len(M.entries)
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for j in range(k):
        ones = [i for i in range(k) if M.entries[i][j] == 1]
        for i in ones[1:]:
            parent[find(i)] = find(ones[0])
    classes: dict[int, set[int]] = {}
    for i in range(k):
        classes.setdefault(find(i), set()).add(i)
    return list(classes.values())


def class_value(M: CosetMatrix) -> int:
    """
    The signed power of two attached to a width-2 matrix: sign of the
    permutation whose cycles are the row classes, times 2^(number of
    nontrivial classes).
    """
    if M.m != 2:
        raise ValueError("class_value is defined for block width 2")
    classes = _row_classes(M)
    k = len(M.entries)
    r = sum(1 for c in classes if len(c) > 1)
    sgn = -1 if (k - len(classes)) % 2 else 1
    return sgn * (1 << r)


def double_coset_leq(M1: CosetMatrix, M2: CosetMatrix) -> bool:
    """Order on double cosets through minimal-length representatives."""
    return P.bruhat_leq(min_rep(M1), min_rep(M2))


# ---------------------------------------------------------------------------
# bucketing the inflated group


_buckets_cache: dict[tuple[int, int], dict] = {}


def _group_buckets(n: int, m: int):
    """Map each coset matrix to the indices of its members inside S_n."""
    got = _buckets_cache.get((n, m))
    if got is None:
        ctx = K._ctx(n)
        got = {}
        for idx, w in enumerate(ctx.perms):
            got.setdefault(coset_matrix(w, m), []).append(idx)
        _buckets_cache[(n, m)] = got
    return got


def _block_subgroup(k: int, m: int) -> list[tuple[Perm, int]]:
    """All elements of the block-diagonal subgroup of S_{mk}, with signs."""
    blocks = list(itertools.permutations(range(1, m + 1)))
    out = []
    for combo in itertools.product(blocks, repeat=k):
        word: list[int] = []
        sgn = 1
        for i, pi in enumerate(combo):
            base = m * i
            word.extend(base + v for v in pi)
            sgn *= P.sign(pi)
        out.append((tuple(word), sgn))
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass
class CosetCheck:
    matrix: CosetMatrix
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {
            "coset_matrix": [list(r) for r in self.matrix.entries],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.ok,
        }


@dataclass
class ParityCheck:
    sigma_prime: Perm
    total: int

    @property
    def ok(self) -> bool:
        return self.total == 1

    def to_json(self) -> dict:
        return {
            "sigma_prime": list(self.sigma_prime),
            "sum": self.total,
            "pass": self.ok,
        }


@dataclass
class IdentityReport:
    sigma: Perm
    sigma0: Perm
    m: int
    cosets: list[CosetCheck]
    parabolic: list[ParityCheck]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cosets) and all(p.ok for p in self.parabolic)

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "sigma0": list(self.sigma0),
            "m": self.m,
            "cosets": [c.to_json() for c in self.cosets],
            "parabolic_sums": [p.to_json() for p in self.parabolic],
            "pass": self.passed,
        }


def _require_hypotheses(sigma0: Perm, sigma: Perm) -> None:
    if len(sigma0) != len(sigma):
        raise ValueError("permutations live in different symmetric groups")
    if not P.smooth_pair_data(sigma0, sigma).is_smooth:
        raise ValueError(f"({sigma}, {sigma0}) is not a smooth pair")
    if not P.is_213_avoiding(sigma0):
        raise ValueError(f"sigma0 = {sigma0} is not 213-avoiding")


def _coset_sums(sigma0: Perm, sigma: Perm, m: int) -> list[CosetCheck]:
    k = len(sigma)
    n = m * k
    st = P.inflate(sigma, m)
    st0 = P.inflate(sigma0, m)
    ctx = K._ctx(n)
    st_idx = ctx.index[st]
    st0_idx = ctx.index[st0]
    lengths = ctx.length
    checks = []
    for M, members in sorted(_group_buckets(n, m).items()):
        rep_idx = ctx.index[min_rep(M)]
        if not (ctx.leq(st0_idx, rep_idx) and ctx.leq(rep_idx, st_idx)):
            continue
        lhs = 0
        for w_idx in members:
            if ctx.leq(w_idx, st_idx):
                packed = ctx.kl_packed(w_idx, st_idx)
                val = 0
                while packed:
                    val += packed & 0xFFFF
                    packed >>= 16
                lhs += -val if lengths[w_idx] % 2 else val
        if m == 2:
            rhs = class_value(M)
        else:
            rhs = sum(P.sign(iota(decomp)) for decomp in birkhoff_decompositions(M))
        checks.append(CosetCheck(M, lhs, rhs))
    return checks


def _parabolic_sums(sigma0: Perm, sigma: Perm, m: int) -> list[ParityCheck]:
    k = len(sigma)
    n = m * k
    st_idx_ctx = K._ctx(n)
    st = P.inflate(sigma, m)
    st_idx = st_idx_ctx.index[st]
    subgroup = _block_subgroup(k, m)
    out = []
    for sp in P.all_perms(k):
        if not (P.bruhat_leq(sigma0, sp) and P.bruhat_leq(sp, sigma)):
            continue
        spt = P.inflate(sp, m)
        total = 0
        for h, sgn in subgroup:
            w = P.compose(spt, h)
            w_idx = st_idx_ctx.index[w]
            packed = st_idx_ctx.kl_packed(w_idx, st_idx)
            val = 0
            while packed:
                val += packed & 0xFFFF
                packed >>= 16
            total += sgn * val
        out.append(ParityCheck(sp, total))
    return out


def verify_klidnt(sigma0: Perm, sigma: Perm) -> IdentityReport:
    """
    Width-2 identity: over every double coset meeting the inflated interval,
    the signed sum of KL values at 1 equals the signed power of two of the
    coset matrix; and each parabolic sum over the block subgroup equals 1.
    """
    sigma0 = P.check_permutation(sigma0)
    sigma = P.check_permutation(sigma)
    _require_hypotheses(sigma0, sigma)
    # LHS sign convention: sgn(w)*sgn(st) relative; fold into coset sums
    cosets = _coset_sums(sigma0, sigma, 2)
    parabolic = _parabolic_sums(sigma0, sigma, 2)
    return IdentityReport(sigma, sigma0, 2, cosets, parabolic)


def verify_higher(sigma0: Perm, sigma: Perm, m: int, opt_in_large: bool = False) -> IdentityReport:
    """
    General width: the closed form is replaced by the signed count of
    decompositions into permutation matrices.  Bounded to mk <= 9; the
    largest case (m = 3, k = 3) must be opted into.
    """
    sigma0 = P.check_permutation(sigma0)
    sigma = P.check_permutation(sigma)
    _require_hypotheses(sigma0, sigma)
    if m < 2:
        raise ValueError("block width must be at least 2")
    n = m * len(sigma)
    if n > 9:
        raise ValueError(f"group size {n} exceeds the supported bound of 9")
    if n == 9 and not opt_in_large:
        raise ValueError("the 9-letter case is slow; pass opt_in_large=True to run it")
    cosets = _coset_sums(sigma0, sigma, m)
    parabolic = _parabolic_sums(sigma0, sigma, m)
    return IdentityReport(sigma, sigma0, m, cosets, parabolic)


# ---------------------------------------------------------------------------
# Latin squares


def latin_square_delta(m: int) -> int:
    """
    Signed count of Latin squares of order m (even minus odd, the sign being
    the product of all row and column signs).  Exhaustive; m <= 4.
    """
    if not 1 <= m <= 4:
        raise ValueError("exhaustive count supported for m <= 4 only")
    rows_pool = list(itertools.permutations(range(1, m + 1)))
    total = 0

    def rec(rows: list[Perm]) -> None:
        nonlocal total
        if len(rows) == m:
            sgn = 1
            for r in rows:
                sgn *= P.sign(r)
            for j in range(m):
                sgn *= P.sign(tuple(r[j] for r in rows))
            total += sgn
            return
        for cand in rows_pool:
            if all(all(r[j] != cand[j] for j in range(m)) for r in rows):
                rows.append(cand)
                rec(rows)
                rows.pop()

    rec([])
    return total


def latin_square_count(m: int) -> int:
    """Number of Latin squares of order m (same enumeration, unsigned)."""
    if not 1 <= m <= 4:
        raise ValueError("exhaustive count supported for m <= 4 only")
    rows_pool = list(itertools.permutations(range(1, m + 1)))
    total = 0

    def rec(rows: list[Perm]) -> None:
        nonlocal total
        if len(rows) == m:
            total += 1
            return
        for cand in rows_pool:
            if all(all(r[j] != cand[j] for j in range(m)) for r in rows):
                rows.append(cand)
                rec(rows)
                rows.pop()

    rec([])
    return total


# ---------------------------------------------------------------------------
# the rank-agreement predicate


def tight_predicate(sigma0: Perm, sigma: Perm, tau: Perm) -> bool:
    """
    If tau matches the rank function of sigma wherever sigma0 does, then
    tau <= sigma; this function evaluates the implication for one tau.
    """
    r0 = P.rank_matrix(sigma0)
    rs = P.rank_matrix(sigma)
    rt = P.rank_matrix(tau)
    k = len(sigma)
    agrees = all(
        rt[i][j] == rs[i][j]
        for i in range(k)
        for j in range(k)
        if r0[i][j] == rs[i][j]
    )
    if not agrees:
        return True
    return P.bruhat_leq(tau, sigma)


def tight_violations(k: int) -> list[tuple[Perm, Perm, Perm]]:
    """
    Exhaustive scan of the predicate over all smooth pairs in S_k and all
    tau; returns every violating triple (empty list expected).
    """
    import numpy as np

    perms = P.sn(k)
    ranks = P.rank_table(k).astype(np.int16)
    leq = P.leq_table(k)
    lengths = np.array([P.length(w) for w in perms])
    trans_idx = []
    index = {w: i for i, w in enumerate(perms)}
    for i, j in P.transpositions(k):
        trans_idx.append([index[P.apply_transposition(w, i, j)] for w in perms])
    trans_idx = np.array(trans_idx)
    violations = []
    for si, sigma in enumerate(perms):
        below = np.nonzero(leq[:, si])[0]
        # j-counts for all candidates sigma0 <= sigma at once
        jc = leq[trans_idx[:, below], si].sum(axis=0)
        smooth_candidates = below[jc == lengths[si]]
        rs = ranks[si]
        for s0i in smooth_candidates:
            mask = ranks[s0i] == rs
            tau_ok = (ranks[:, mask] == rs[mask]).all(axis=1)
            bad = np.nonzero(tau_ok & ~leq[:, si])[0]
            for ti in bad:
                violations.append((perms[s0i], sigma, perms[ti]))
    return violations
