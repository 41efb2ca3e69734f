"""
Kazhdan-Lusztig polynomials for symmetric groups.

Two independent computation routes:

* ``kl_polynomial`` runs the classical descent recursion, organized by
  columns (all lower indices for a fixed upper index) with a shared memo
  cache, so a single high element does not force a full-group table.
* ``kl_oracle`` builds canonical basis elements of the Hecke algebra by
  solving the triangular bar-invariance system over Laurent polynomials.
  It shares no code with the recursion and serves as a cross-check
  (small ranks only).

Internal representations: group elements are indices into the
lexicographically sorted list of S_n; polynomials in the recursion are
nonneg-coefficient integers packed 16 bits per degree, which makes addition
and shifting single integer operations.  Coefficients are exact (Python
integers); packing is valid because coefficients at these ranks stay far
below 2**16 and every subtraction has a coefficientwise-nonnegative result.
"""

from __future__ import annotations

import itertools
import struct
import threading
from typing import Iterable, Optional

from .perm import Perm, check_permutation

_SHIFT = 16
_MASK = 0xFFFF
_PONE = 1
_PZERO = 0

_CACHE_MAGIC = b"SQKL"
_CACHE_VERSION = 1


def _packed_to_tuple(p: int) -> tuple[int, ...]:
    out = []
    while p:
        c = p & _MASK
        if c >= 1 << 15:
            raise AssertionError("coefficient approaching the 16-bit limb bound")
        out.append(c)
        p >>= _SHIFT
    return tuple(out)


class KLPolynomial:
    """Integer-coefficient polynomial in q; index = degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, value: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, KLPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"KLPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if d == 0:
                parts.append(str(c))
            elif d == 1:
                parts.append("q" if c == 1 else f"{c}q")
            else:
                parts.append(f"q^{d}" if c == 1 else f"{c}q^{d}")
        return " + ".join(parts)

    def to_json(self) -> list[int]:
        return list(self.coeffs)


ONE = KLPolynomial((1,))
ZERO = KLPolynomial(())


# ---------------------------------------------------------------------------
# recursion engine


class _SymContext:
    """Indexed S_n with multiplication tables and the column cache."""

    def __init__(self, n: int):
        self.n = n
        perms = list(itertools.permutations(range(1, n + 1)))
        self.perms = perms
        self.index = {p: i for i, p in enumerate(perms)}
        N = len(perms)
        self.N = N
        self.length = [
            sum(1 for i, j in itertools.combinations(range(n), 2) if p[i] > p[j])
            for p in perms
        ]
        # rmul[i][w]: swap positions i, i+1 (0-based); lmul[i][w]: swap values i+1, i+2
        self.rmul = []
        self.lmul = []
        for i in range(n - 1):
            r = [0] * N
            l = [0] * N
            for w, p in enumerate(perms):
                q = list(p)
                q[i], q[i + 1] = q[i + 1], q[i]
                r[w] = self.index[tuple(q)]
                q = [i + 2 if v == i + 1 else i + 1 if v == i + 2 else v for v in p]
                l[w] = self.index[tuple(q)]
            self.rmul.append(r)
            self.lmul.append(l)
        self.inv = [self.index[tuple(sorted(range(1, n + 1), key=lambda v: p[v - 1]))] for p in perms]
        self.conj = [self.index[tuple(n + 1 - p[n - 1 - j] for j in range(n))] for p in perms]
        # rank matrices packed 8 bits per cell, row-major
        self.rank = [self._pack_rank(p) for p in perms]
        self.HI = int.from_bytes(b"\x80" * (n * n), "little")
        self._cols: dict[int, dict[int, int]] = {}
        self._mus: dict[int, list[tuple[int, int]]] = {}
        self._smooth: dict[int, bool] = {}
        self._lock = threading.RLock()

    def _pack_rank(self, p: Perm) -> int:
        n = self.n
        acc = 0
        counts = [0] * n
        cell = 0
        for i in range(n):
            counts = counts.copy()
            for j in range(p[i] - 1, n):
                counts[j] += 1
            for j in range(n):
                acc |= counts[j] << (8 * cell)
                cell += 1
        return acc

    def leq(self, x: int, w: int) -> bool:
        """x <= w in Bruhat order."""
        if x == w:
            return True
        if self.length[x] >= self.length[w]:
            return False
        rx = self.rank[x]
        rw = self.rank[w]
        return ((rx | self.HI) - rw) & self.HI == self.HI

    def smooth(self, w: int) -> bool:
        got = self._smooth.get(w)
        if got is None:
            p = self.perms[w]
            got = True
            for a, b, c, d in itertools.combinations(range(self.n), 4):
                pa, pb, pc, pd = p[a], p[b], p[c], p[d]
                # patterns 4231 and 3412
                if (pd < pb < pc < pa) or (pc < pd < pa < pb):
                    got = False
                    break
            self._smooth[w] = got
        return got

    def covers(self, v: int) -> list[int]:
        """Lower covers of v in Bruhat order."""
        p = self.perms[v]
        out = []
        for i, j in itertools.combinations(range(self.n), 2):
            if p[i] > p[j] and not any(p[j] < p[l] < p[i] for l in range(i + 1, j)):
                q = list(p)
                q[i], q[j] = q[j], q[i]
                out.append(self.index[tuple(q)])
        return out

    def _canon(self, w: int) -> tuple[int, int]:
        """Smallest index among the four symmetry variants, with its tag."""
        iw = self.inv[w]
        return min((w, 0), (iw, 1), (self.conj[w], 2), (self.conj[iw], 3))

    def _tx(self, x: int, tag: int) -> int:
        if tag == 0:
            return x
        if tag == 1:
            return self.inv[x]
        if tag == 2:
            return self.conj[x]
        return self.conj[self.inv[x]]

    def interval_below(self, w: int) -> list[int]:
        """All x <= w, sorted by decreasing length (computed fresh, O(n!))."""
        rw = self.rank[w]
        HI = self.HI
        lw = self.length[w]
        length = self.length
        rank = self.rank
        out = [
            x
            for x in range(self.N)
            if length[x] <= lw and ((rank[x] | HI) - rw) & HI == HI
        ]
        out.sort(key=length.__getitem__, reverse=True)
        return out

    def col(self, w: int) -> dict[int, int]:
        """Sparse column {x: packed P_{x,w}} holding only entries != 1."""
        got = self._cols.get(w)
        if got is not None:
            return got
        with self._lock:
            got = self._cols.get(w)
            if got is not None:
                return got
            wc, tag = self._canon(w)
            if wc != w:
                base = self.col(wc)
                out = {self._tx(x, tag): p for x, p in base.items()}
            else:
                out = self._build(w)
            self._cols[w] = out
            return out

    def mu_list(self, v: int) -> list[tuple[int, int]]:
        """All (z, mu(z, v)) with nonzero mu."""
        got = self._mus.get(v)
        if got is not None:
            return got
        with self._lock:
            got = self._mus.get(v)
            if got is not None:
                return got
            out = [(z, 1) for z in self.covers(v)]
            lv = self.length[v]
            for z, p in self.col(v).items():
                d = lv - self.length[z]
                if d >= 3 and d % 2:
                    top = (p >> (_SHIFT * ((d - 1) // 2))) & _MASK
                    if top:
                        out.append((z, top))
            out.sort(key=lambda t: -self.length[t[0]])
            self._mus[v] = out
            return out

    def _getp(self, x: int, v: int, colv: dict[int, int]) -> int:
        """Packed P_{x,v} given v's column."""
        if x == v:
            return _PONE
        if not self.leq(x, v):
            return _PZERO
        return colv.get(x, _PONE)

    def _build(self, w: int) -> dict[int, int]:
        if self.length[w] <= 2 or self.smooth(w):
            return {}
        word = self.perms[w]
        s = next(i for i in range(self.n - 1) if word[i] > word[i + 1])
        rmul_s = self.rmul[s]
        v = rmul_s[w]
        colv = self.col(v)
        lw = self.length[w]
        length = self.length
        # mu terms of v whose index has s as a right descent, with column handles
        terms = []
        for z, mu in self.mu_list(v):
            pz = self.perms[z]
            if pz[s] > pz[s + 1]:
                terms.append((z, mu << (_SHIFT * ((lw - length[z]) // 2)), length[z], self.col(z)))
        out: dict[int, int] = {}
        for x in self.interval_below(w):
            lx = length[x]
            if lw - lx <= 2:
                continue
            xs = rmul_s[x]
            if length[xs] > lx:
                p = out.get(xs, _PONE)  # P_{x,w} = P_{xs,w}, already computed
                if p != _PONE:
                    out[x] = p
                continue
            acc = self._getp(xs, v, colv) + (self._getp(x, v, colv) << _SHIFT)
            for z, shifted_mu, lz, colz in terms:
                if lz < lx:
                    break  # terms sorted by decreasing length
                if x == z:
                    acc -= shifted_mu
                elif self.leq(x, z):
                    acc -= shifted_mu * colz.get(x, _PONE)
            if acc != _PONE:
                # constant term 1 and bounded degree; violations mean limb
                # corruption in the packed arithmetic
                if acc & _MASK != 1 or acc.bit_length() > _SHIFT * (lw // 2 + 1):
                    raise AssertionError(f"corrupt polynomial for pair {x}, {w}")
                out[x] = acc
        return out

    def kl_packed(self, x: int, w: int) -> int:
        if x == w:
            return _PONE
        if not self.leq(x, w):
            return _PZERO
        # lift x through the right and left descents of w
        perms = self.perms
        while True:
            px = perms[x]
            pw = perms[w]
            moved = False
            for i in range(self.n - 1):
                if pw[i] > pw[i + 1] and px[i] < px[i + 1]:
                    x = self.rmul[i][x]
                    moved = True
                    break
            if moved:
                continue
            pix = perms[self.inv[x]]
            piw = perms[self.inv[w]]
            for i in range(self.n - 1):
                if piw[i] > piw[i + 1] and pix[i] < pix[i + 1]:
                    x = self.lmul[i][x]
                    moved = True
                    break
            if not moved:
                break
        if x == w or self.length[w] - self.length[x] <= 2 or self.smooth(w):
            return _PONE
        return self.col(w).get(x, _PONE)


_contexts: dict[int, _SymContext] = {}
_contexts_lock = threading.Lock()


def _ctx(n: int) -> _SymContext:
    ctx = _contexts.get(n)
    if ctx is None:
        with _contexts_lock:
            ctx = _contexts.get(n)
            if ctx is None:
                ctx = _SymContext(n)
                _contexts[n] = ctx
    return ctx


def _check_pair(x: Perm, w: Perm) -> tuple[Perm, Perm]:
    x = check_permutation(x)
    w = check_permutation(w)
    if len(x) != len(w):
        raise ValueError("permutations live in different symmetric groups")
    return x, w


def kl_polynomial(x: Perm, w: Perm) -> KLPolynomial:
    """P_{x,w} by the descent recursion (memoized across calls)."""
    x, w = _check_pair(x, w)
    ctx = _ctx(len(x))
    packed = ctx.kl_packed(ctx.index[x], ctx.index[w])
    return KLPolynomial(_packed_to_tuple(packed))


def kl_at_one(x: Perm, w: Perm) -> int:
    """P_{x,w}(1), the main quantity consumed by the decision layer."""
    x, w = _check_pair(x, w)
    ctx = _ctx(len(x))
    packed = ctx.kl_packed(ctx.index[x], ctx.index[w])
    total = 0
    while packed:
        total += packed & _MASK
        packed >>= _SHIFT
    return total


def kl_table(n: int) -> dict[tuple[Perm, Perm], KLPolynomial]:
    """Full table for sweeps: every comparable pair of S_n (small ranks)."""
    if n > 6:
        raise ValueError("full tables are supported for rank up to S_6")
    ctx = _ctx(n)
    out: dict[tuple[Perm, Perm], KLPolynomial] = {}
    for wi, w in enumerate(ctx.perms):
        for xi in ctx.interval_below(wi):
            poly = KLPolynomial(_packed_to_tuple(ctx.kl_packed(xi, wi)))
            out[(ctx.perms[xi], w)] = poly
    return out


# ---------------------------------------------------------------------------
# bar-invariance oracle

_ORACLE_MAX = 6

_Laurent = dict  # exponent (power of v) -> integer coefficient


def _lau_add(dst: _Laurent, src: _Laurent, scale: int = 1) -> None:
    for e, c in src.items():
        val = dst.get(e, 0) + scale * c
        if val:
            dst[e] = val
        else:
            dst.pop(e, None)


def _lau_mul(p: _Laurent, q: _Laurent) -> _Laurent:
    out: _Laurent = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            val = out.get(e, 0) + c1 * c2
            if val:
                out[e] = val
            else:
                out.pop(e, None)
    return out


def _lau_bar(p: _Laurent) -> _Laurent:
    return {-e: c for e, c in p.items()}


class _OracleContext:
    """Canonical-basis solver; completely separate from the recursion."""

    def __init__(self, n: int):
        self.n = n
        perms = list(itertools.permutations(range(1, n + 1)))
        self.perms = perms
        self.index = {p: i for i, p in enumerate(perms)}
        self.length = [
            sum(1 for i, j in itertools.combinations(range(n), 2) if p[i] > p[j])
            for p in perms
        ]
        self.lmul = []
        for i in range(n - 1):
            col = [0] * len(perms)
            for w, p in enumerate(perms):
                q = [i + 2 if v == i + 1 else i + 1 if v == i + 2 else v for v in p]
                col[w] = self.index[tuple(q)]
            self.lmul.append(col)
        self.bars = self._bar_table()
        self._bar_rows: Optional[list[list[tuple[int, _Laurent]]]] = None
        self._columns: dict[int, dict[int, _Laurent]] = {}

    def _tsmul(self, s: int, vec: dict[int, _Laurent]) -> dict[int, _Laurent]:
        """Left multiplication of a normalized-basis vector by the generator."""
        out: dict[int, _Laurent] = {}
        lmul_s = self.lmul[s]
        for y, poly in vec.items():
            sy = lmul_s[y]
            if self.length[sy] > self.length[y]:
                _lau_add(out.setdefault(sy, {}), poly)
            else:
                _lau_add(out.setdefault(sy, {}), poly)
                _lau_add(out.setdefault(y, {}), _lau_mul(poly, {1: 1, -1: -1}))
        return {y: p for y, p in out.items() if p}

    def _bar_table(self) -> list[dict[int, _Laurent]]:
        """bars[x] expands the bar of the normalized basis element of x."""
        N = len(self.perms)
        order = sorted(range(N), key=self.length.__getitem__)
        bars: list[Optional[dict[int, _Laurent]]] = [None] * N
        bars[order[0]] = {order[0]: {0: 1}}
        for x in order[1:]:
            p = self.perms[x]
            s = next(
                i
                for i in range(self.n - 1)
                if p.index(i + 1) > p.index(i + 2)
            )
            y = self.lmul[s][x]
            base = bars[y]
            assert base is not None
            # bar of the generator is itself plus (v^-1 - v) times the identity
            out = self._tsmul(s, base)
            for y2, poly in base.items():
                _lau_add(out.setdefault(y2, {}), _lau_mul(poly, {-1: 1, 1: -1}))
            bars[x] = {y2: q for y2, q in out.items() if q}
        return bars  # type: ignore[return-value]

    def bar_rows(self) -> list[list[tuple[int, _Laurent]]]:
        if self._bar_rows is None:
            rows: list[list[tuple[int, _Laurent]]] = [[] for _ in self.perms]
            for x, vec in enumerate(self.bars):
                for y, poly in vec.items():
                    if y != x:
                        rows[y].append((x, poly))
            self._bar_rows = rows
        return self._bar_rows

    def column(self, w: int) -> dict[int, _Laurent]:
        got = self._columns.get(w)
        if got is not None:
            return got
        rows = self.bar_rows()
        p: dict[int, _Laurent] = {w: {0: 1}}
        barp: dict[int, _Laurent] = {w: {0: 1}}
        order = sorted(
            (y for y in range(len(self.perms)) if self.length[y] < self.length[w]),
            key=self.length.__getitem__,
            reverse=True,
        )
        for y in order:
            h: _Laurent = {}
            for x, rpoly in rows[y]:
                bx = barp.get(x)
                if bx:
                    _lau_add(h, _lau_mul(rpoly, bx))
            if not h:
                continue
            if h.get(0, 0) != 0 or any(h.get(e, 0) != -h.get(-e, 0) for e in h):
                raise AssertionError("bar-invariance system is inconsistent")
            py = {e: c for e, c in h.items() if e < 0}
            if py:
                p[y] = py
                barp[y] = _lau_bar(py)
        self._columns[w] = p
        return p

    def polynomial(self, x: int, w: int) -> KLPolynomial:
        col = self.column(w)
        px = col.get(x)
        if px is None:
            if x == w:
                return ONE
            return ZERO
        shift = self.length[w] - self.length[x]
        coeffs = [0] * ((shift + max(px)) // 2 + 1) if px else []
        for e, c in px.items():
            two_j = e + shift
            if two_j % 2 or two_j < 0:
                raise AssertionError("parity violation in canonical basis")
            j = two_j // 2
            while len(coeffs) <= j:
                coeffs.append(0)
            coeffs[j] = c
        return KLPolynomial(coeffs)


_oracle_contexts: dict[int, _OracleContext] = {}


def kl_oracle(x: Perm, w: Perm) -> KLPolynomial:
    """P_{x,w} via canonical-basis bar invariance; limited to small ranks."""
    x, w = _check_pair(x, w)
    n = len(x)
    if n > _ORACLE_MAX:
        raise ValueError(f"oracle supports rank up to S_{_ORACLE_MAX}")
    ctx = _oracle_contexts.get(n)
    if ctx is None:
        ctx = _OracleContext(n)
        _oracle_contexts[n] = ctx
    return ctx.polynomial(ctx.index[x], ctx.index[w])


# ---------------------------------------------------------------------------
# optional cache persistence (used by the CLI)


def save_cache(path: str) -> int:
    """Dump every cached recursion column; returns the number of entries."""
    records = 0
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<H", _CACHE_VERSION))
        for n, ctx in sorted(_contexts.items()):
            for w, col in sorted(ctx._cols.items()):
                fh.write(struct.pack("<BII", n, w, len(col)))
                for x, packed in sorted(col.items()):
                    blob = packed.to_bytes((packed.bit_length() + 7) // 8 or 1, "little")
                    fh.write(struct.pack("<IH", x, len(blob)))
                    fh.write(blob)
                records += 1
    return records


def load_cache(path: str) -> int:
    """Load a cache written by :func:`save_cache`; returns entries loaded."""
    records = 0
    with open(path, "rb") as fh:
        if fh.read(4) != _CACHE_MAGIC:
            raise ValueError("not a KL cache file")
        (version,) = struct.unpack("<H", fh.read(2))
        if version != _CACHE_VERSION:
            raise ValueError(f"unsupported KL cache version {version}")
        while True:
            head = fh.read(9)
            if not head:
                break
            n, w, count = struct.unpack("<BII", head)
            col = {}
            for _ in range(count):
                x, blen = struct.unpack("<IH", fh.read(6))
                col[x] = int.from_bytes(fh.read(blen), "little")
            _ctx(n)._cols[w] = col
            records += 1
    return records
