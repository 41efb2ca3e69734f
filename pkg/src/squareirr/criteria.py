"""
The decision layer for square-irreducibility of regular multisegments.

Four criteria are computed by independent routes and cross-checked:

* balanced: depth equals complexity, decided through the tangent-space
  count of the pair of permutations attached to the multisegment;
* pattern-free: no sub-multisegment of shape 4231 or 3412;
* kl_one: the Kazhdan-Lusztig polynomial of the attached pair evaluates
  to 1 at q = 1;
* gls: the open-orbit rank condition, decided by structural certificates
  where available and by randomized exact rank over a large prime field
  otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Union

from . import biseq as B
from . import klpoly as K
from . import perm as P
from .matching import maximum_matching
from .multiseg import (
    Multisegment,
    Segment,
    link_data,
    precedes,
    rel_adjacency,
    shift_down,
    speh,
    elementary_moves,
    downward_closure,
    detachable_segments,
)
from .perm import Perm

GLS_PRIME = 2**31 - 1


# ---------------------------------------------------------------------------
# complexity / depth / balanced


def complexity(m: Multisegment) -> int:
    """Length of a longest chain of elementary moves below m."""
    if m.is_regular:
        return len(link_data(m).X)
    return complexity_by_chains(m)


def complexity_by_chains(m: Multisegment) -> int:
    """Brute-force longest-chain count; independent of the link-set formula."""
    best = {}

    def rec(cur: Multisegment) -> int:
        got = best.get(cur)
        if got is None:
            got = 0
            for child in elementary_moves(cur):
                got = max(got, 1 + rec(child))
            best[cur] = got
        return got

    return rec(m)


def is_apu(m: Multisegment) -> bool:
    """One elementary move away from a pairwise-unlinked multisegment."""
    return any(child.is_pairwise_unlinked for child in elementary_moves(m))


def depth_by_apu(m: Multisegment) -> int:
    """Brute-force count of almost-pairwise-unlinked multisegments below m."""
    return sum(1 for n in downward_closure(m) if is_apu(n))


def depth(m: Multisegment) -> int:
    """
    Number of almost-pairwise-unlinked multisegments reachable below m; for
    regular m this is the restricted transposition count of the attached
    pair of permutations.
    """
    if not m.is_regular:
        return depth_by_apu(m)
    A, sigma = B.factorize(m)
    sigma0 = B.sigma0(A)
    return P.smooth_pair_data(sigma0, sigma).i_count


def is_balanced(m: Multisegment) -> bool:
    """depth == complexity, via the smooth-pair test. Regular input only."""
    if not m.is_regular:
        raise ValueError("balanced is defined for regular multisegments only")
    A, sigma = B.factorize(m)
    sigma0 = B.sigma0(A)
    return P.smooth_pair_data(sigma0, sigma).is_smooth


# ---------------------------------------------------------------------------
# forbidden sub-multisegments


def _is_type_4231(segs: tuple[Segment, ...]) -> bool:
    k = len(segs)
    if k < 4:
        return False
    if not all(precedes(segs[i], segs[i - 1]) for i in range(3, k)):
        return False
    if not precedes(segs[2], segs[0]):
        return False
    return segs[k - 1].a < segs[1].a < segs[k - 2].a


def _is_type_3412(segs: tuple[Segment, ...]) -> bool:
    k = len(segs)
    if k < 4:
        return False
    if not all(precedes(segs[i], segs[i - 1]) for i in range(4, k)):
        return False
    if not precedes(segs[3], segs[1]):
        return False
    l = 1 if k == 4 else k - 2
    return segs[2].a < segs[k - 1].a < segs[0].a < segs[l].a


def has_forbidden_type(m: Multisegment) -> Optional[tuple[str, tuple[int, ...]]]:
    """
    Smallest (then lexicographically first) index subset carrying a
    sub-multisegment of shape 4231 or 3412; None when balanced.
    """
    if not m.is_regular:
        raise ValueError("forbidden-type search requires a regular multisegment")
    k = len(m)
    for size in range(4, k + 1):
        for idx in itertools.combinations(range(1, k + 1), size):
            segs = tuple(m.seg(i) for i in idx)
            if _is_type_4231(segs):
                return ("4231", idx)
            if _is_type_3412(segs):
                return ("3412", idx)
    return None


# ---------------------------------------------------------------------------
# the open-orbit condition


@dataclass
class GlsReport:
    value: bool
    method: str  # "strong-matching" | "rank" | "certificate"
    trials: int = 0
    certificate: Optional[str] = None
    witness_lambda: Optional[dict[tuple[int, int], int]] = None
    field: Optional[int] = None
    rank_achieved: Optional[int] = None
    residual_error: Optional[float] = None

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "trials": self.trials}


def neighbor_map(m: Multisegment) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Neighbours inside the shifted link set, for the self-pairing of m."""
    X, Xt = link_data(m)
    return rel_adjacency(m, m, X, Xt)


def irreducible_pairs(m: Multisegment) -> list[tuple[int, int]]:
    """Link pairs whose only neighbours are the two diagonal ones."""
    out = []
    for (i, j), nbrs in neighbor_map(m).items():
        if set(nbrs) == {(i, i), (j, j)}:
            out.append((i, j))
    return sorted(out)


def _edge_label(m: Multisegment, x: tuple[int, int], y: tuple[int, int]) -> Optional[tuple[int, int]]:
    """Label of the neighbour edge x -> y, itself a link pair of m."""
    i1, j1 = x
    i2, j2 = y
    if i1 == i2 and precedes(m.seg(j2), m.seg(j1)):
        return (j2, j1)
    if j1 == j2 and precedes(m.seg(i1), m.seg(i2)):
        return (i1, i2)
    return None


def _matching_is_strong(m: Multisegment, f: dict, labels: dict) -> bool:
    """
    A matching is strong when some enumeration r_1..r_n of the link set has
    no earlier r_i neighbouring a later f(r_j) through a used label; this
    holds iff the forced comes-after digraph is acyclic.
    """
    used_labels = {labels[(x, f[x])] for x in f}
    X = list(f)
    after: dict = {x: [] for x in X}  # edge r' -> r: r must come after r'
    for rp in X:
        target = f[rp]
        for r in X:
            if r == rp:
                continue
            lab = _edge_label(m, r, target)
            if lab is not None and lab in used_labels:
                after[rp].append(r)
    # cycle detection
    state: dict = {}

    def dfs(u) -> bool:
        state[u] = 1
        for v in after[u]:
            s = state.get(v)
            if s == 1:
                return False
            if s is None and not dfs(v):
                return False
        state[u] = 2
        return True

    return all(state.get(u) == 2 or dfs(u) for u in X)


def find_strong_matching(m: Multisegment, budget: int = 20000) -> Optional[dict]:
    """
    Bounded backtracking search for a strong neighbour-respecting injection;
    None if none is found within the budget (which proves nothing).
    """
    adj = neighbor_map(m)
    X = sorted(adj, key=lambda x: (len(adj[x]), x))
    labels = {}
    for x, nbrs in adj.items():
        for y in nbrs:
            labels[(x, y)] = _edge_label(m, x, y)
    used: set = set()
    assign: dict = {}
    steps = 0

    def backtrack(pos: int) -> Optional[dict]:
        nonlocal steps
        if pos == len(X):
            return dict(assign) if _matching_is_strong(m, assign, labels) else None
        x = X[pos]
        for y in adj[x]:
            if y in used:
                continue
            steps += 1
            if steps > budget:
                return None
            used.add(y)
            assign[x] = y
            got = backtrack(pos + 1)
            if got is not None:
                return got
            used.discard(y)
            del assign[x]
        return None

    if any(not nbrs for nbrs in adj.values()):
        return None
    return backtrack(0)


def _gls_vectors_mod(m: Multisegment, lam: dict, p: int) -> list[list[int]]:
    """Rows of the rank test: one vector over the shifted link set per link pair."""
    X, Xt = link_data(m)
    xt_index = {y: c for c, y in enumerate(sorted(Xt))}
    rows = []
    for (i, j) in sorted(X):
        row = [0] * len(xt_index)
        for r in range(1, len(m) + 1):
            if (r, j) in X and (i, r) in Xt:
                row[xt_index[(i, r)]] = (row[xt_index[(i, r)]] + lam[(r, j)]) % p
        for s in range(1, len(m) + 1):
            if (s, j) in Xt and (i, s) in X:
                row[xt_index[(s, j)]] = (row[xt_index[(s, j)]] - lam[(i, s)]) % p
        rows.append(row)
    return rows


def _rank_mod(rows: list[list[int]], p: int) -> int:
    rows = [row[:] for row in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    pivot_row = 0
    for c in range(cols):
        pivot = next((r for r in range(pivot_row, len(rows)) if rows[r][c] % p), None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        inv = pow(rows[pivot_row][c], -1, p)
        rows[pivot_row] = [(v * inv) % p for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][c]:
                factor = rows[r][c]
                rows[r] = [(v - factor * u) % p for v, u in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        rank += 1
        if pivot_row == len(rows):
            break
    return rank


def gls_check(m: Multisegment, trials: int = 3, seed: int = 0) -> tuple[bool, GlsReport]:
    """
    Decide the open-orbit condition.  True outcomes are proofs: either a
    strong matching or a full-rank specialization over the prime field.
    False outcomes are proofs when a certificate exists (too many
    irreducible pairs, or no neighbour-respecting matching at all) and
    otherwise carry the residual error bound of the randomized test.
    """
    X, Xt = link_data(m)
    if not X:
        return True, GlsReport(True, "strong-matching")
    k = len(m)
    adj = rel_adjacency(m, m, X, Xt)
    size, _ = maximum_matching(adj)
    if size < len(X):
        return False, GlsReport(
            False,
            "certificate",
            certificate=f"no neighbour-respecting matching ({size} < {len(X)})",
        )
    irr = irreducible_pairs(m)
    if len(irr) >= k:
        return False, GlsReport(
            False, "certificate", certificate=f"{len(irr)} irreducible pairs >= {k}"
        )
    strong = find_strong_matching(m)
    if strong is not None:
        return True, GlsReport(True, "strong-matching")
    rng = random.Random(seed)
    p = GLS_PRIME
    best_rank = 0
    last_lambda: dict = {}
    for _ in range(trials):
        lam = {x: rng.randrange(1, p) for x in sorted(X)}
        rank = _rank_mod(_gls_vectors_mod(m, lam, p), p)
        if rank == len(X):
            return True, GlsReport(
                True,
                "rank",
                trials=trials,
                witness_lambda=lam,
                field=p,
                rank_achieved=rank,
            )
        if rank > best_rank:
            best_rank = rank
            last_lambda = lam
    return False, GlsReport(
        False,
        "rank",
        trials=trials,
        witness_lambda=last_lambda,
        field=p,
        rank_achieved=best_rank,
        residual_error=(len(X) / p) ** trials,
    )


# ---------------------------------------------------------------------------
# the combined verdict


@dataclass
class Verdict:
    input_str: str
    regular: bool
    balanced: Optional[bool]
    gls: GlsReport
    kl_one: Optional[bool]
    pattern_free: Optional[bool]
    agree: Optional[bool]
    square_irreducible: Optional[bool]

    def to_json(self) -> dict:
        return {
            "input": self.input_str,
            "regular": self.regular,
            "balanced": self.balanced,
            "gls": self.gls.to_json(),
            "kl_one": self.kl_one,
            "pattern_free": self.pattern_free,
            "agree": self.agree,
            "square_irreducible": self.square_irreducible,
        }


def kl_criterion(m: Multisegment) -> bool:
    """P(1) == 1 for the pair of permutations attached to m."""
    A, sigma = B.factorize(m)
    sigma0 = B.sigma0(A)
    return K.kl_at_one(sigma0, sigma) == 1


def decide_square_irreducible(m: Multisegment, trials: int = 3, seed: int = 0) -> Verdict:
    """
    Evaluate all four criteria and cross-check.  For regular input the
    common value is the verdict; for non-regular input only the two
    criteria that are defined (gls, kl_one) are reported and no verdict is
    claimed (the equivalence is conjectural there).
    """
    gls_value, gls_report = gls_check(m, trials=trials, seed=seed)
    klv = kl_criterion(m)
    if not m.is_regular:
        return Verdict(str(m), False, None, gls_report, klv, None, None, None)
    bal = is_balanced(m)
    pat = has_forbidden_type(m) is None
    agree = bal == pat == klv == gls_value
    return Verdict(str(m), True, bal, gls_report, klv, pat, agree, bal)


# ---------------------------------------------------------------------------
# minimal unbalanced classification


def _case_4231(m: Multisegment) -> Optional[int]:
    segs = m.segments
    k = len(segs)
    if k < 4:
        return None
    if not all(segs[k - 1].a < segs[i].a < segs[0].a for i in range(1, k - 1)):
        return None
    for i in range(1, k - 2):
        for j in range(1, k - 2):
            if segs[i + 1].a < segs[j].a < segs[i].a:
                return None
    gaps = [i for i in range(k - 1) if not precedes(segs[i + 1], segs[i])]
    if not gaps:
        return None
    r = max(gaps) + 1  # 1-based
    if r >= k - 1:
        return None
    if not precedes(segs[r], segs[0]):
        return None
    return r


def _case_3412(m: Multisegment) -> Optional[int]:
    segs = m.segments
    k = len(segs)
    if k < 4:
        return None
    for r in range(2, k - 1):  # 1-based r with 1 < r < k-1
        tau = list(range(k))
        tau[r - 1], tau[r] = tau[r], tau[r - 1]
        ok = all(
            precedes(segs[tau[i]], segs[tau[i - 1]])
            for i in range(1, k)
            if i != r
        )
        if not ok:
            continue
        if segs[tau[1]].a < segs[k - 1].a < segs[0].a < segs[tau[k - 2]].a:
            return r
    return None


def _case_34_12(m: Multisegment) -> bool:
    segs = m.segments
    k = len(segs)
    if k <= 4:
        return False
    checks = [
        segs[0].a <= segs[1].a and segs[1].b <= segs[0].b,  # second nested in first
        precedes(segs[2], segs[0]),
        all(precedes(segs[i + 1], segs[i]) for i in range(2, k - 3)),
        precedes(segs[k - 1], segs[k - 3]),
        segs[k - 2].a <= segs[k - 1].a and segs[k - 1].b <= segs[k - 2].b,
        precedes(segs[k - 1], segs[1]),
    ]
    return all(checks)


def classify_minimal_unbalanced(
    m: Multisegment,
) -> Optional[tuple[str, Optional[int]]]:
    """
    Detect the three shapes of minimal unbalanced multisegments; returns the
    case name and its shift parameter, or None for anything else.
    """
    if not m.is_regular:
        raise ValueError("classification requires a regular multisegment")
    hits: list[tuple[str, Optional[int]]] = []
    r1 = _case_4231(m)
    if r1 is not None:
        hits.append(("4*23*1", r1))
    r2 = _case_3412(m)
    if r2 is not None:
        hits.append(("3*41*2", r2))
    if _case_34_12(m):
        hits.append(("34*12", None))
    if len(hits) > 1:
        raise AssertionError(f"overlapping minimal-unbalanced cases for {m}: {hits}")
    return hits[0] if hits else None


def minimal_unbalanced_brute(m: Multisegment) -> bool:
    """Direct definition: unbalanced, with every detachable removal balanced."""
    if is_balanced(m):
        return False
    return all(is_balanced(m.remove_at(i)) for i in detachable_segments(m))


# ---------------------------------------------------------------------------
# basic families


def basic_family(kind: str, k: int, l: Optional[int] = None) -> Multisegment:
    """
    The three families of minimal unbalanced multisegments, by shape:
    ``4231`` (k >= 4), ``3412`` (k > l > 2), ``3412b`` (k > 4).
    """
    if kind == "4231":
        if k < 4:
            raise ValueError("kind 4231 requires k >= 4")
        return (
            Multisegment([Segment(k, k + 1), Segment(2, k), Segment(1, 2)])
            + speh(Segment(k - 1, k - 1), k - 3)
        )
    if kind == "3412":
        if l is None or not (k > l > 2):
            raise ValueError("kind 3412 requires k > l > 2")
        return (
            Multisegment(
                [
                    Segment(l, l + k - 1),
                    Segment(k, k + 1),
                    Segment(1, k),
                    Segment(l - 1, l),
                ]
            )
            + speh(Segment(l - 2, l + k - 2), l - 3)
            + speh(Segment(k - 1, k - 1), k - l - 1)
        )
    if kind == "3412b":
        if k <= 4:
            raise ValueError("kind 3412b requires k > 4")
        segs = [Segment(k - 1, 2 * k - 2), Segment(k, 2 * k - 3)]
        segs += [Segment(k - 1 - i, 2 * k - 3 - i) for i in range(1, k - 3)]
        segs += [Segment(1, k), Segment(2, k - 1)]
        return Multisegment(segs)
    raise ValueError(f"unknown family kind {kind!r}")


# ---------------------------------------------------------------------------
# expansion in the standard basis


def grothendieck_expansion(A: B.BiSequence, sigma: Perm) -> dict[Perm, int]:
    """
    Signed Kazhdan-Lusztig values over the interval attached to (A, sigma):
    sigma' maps to sgn(sigma'sigma) * P(1).  Requires A regular and sigma
    admissible for it.
    """
    if not A.is_regular:
        raise ValueError("expansion requires a regular bi-sequence")
    sigma = P.check_permutation(sigma)
    sigma0 = B.sigma0(A)
    if not P.bruhat_leq(sigma0, sigma):
        raise ValueError("sigma is not above the minimal permutation of A")
    sgn_sigma = P.sign(sigma)
    out: dict[Perm, int] = {}
    for sp in P.all_perms(len(sigma)):
        if P.bruhat_leq(sigma0, sp) and P.bruhat_leq(sp, sigma):
            out[sp] = sgn_sigma * P.sign(sp) * K.kl_at_one(sp, sigma)
    return out
