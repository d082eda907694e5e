"""Exact linear algebra and homology over the truncated chain ring.

Homology of a complex of free O-modules, computed from its reduction mod
p^N.  The workhorse is the Smith form over the discrete valuation ring O,
found by global minimal-valuation pivoting: the smallest valuation entry of
the matrix is the first invariant factor, and clearing its row and column
is exact (every elimination is a dominated division, so q*a = b holds on
the nose in the chain ring).  The computation therefore agrees with the
exact one over O until an entry that is O-nonzero truncates to zero; such
divergences only inject entries of valuation >= cap - V, where V bounds
the honest invariant factors, and the threshold (default cap/2) keeps them
classified as zero.  homology_class re-verifies by recomputing at
precision N+2 and comparing classes.

For the cohomology at position i, with d_in = d^{i-1} and d_out = d^i:

  torsion(H^i) = sum of O/pi^a over the positive finite Smith exponents a
  of d_in.  Justification: if d_in = diag(pi^{a_j}) on bases (v_j), (u_j),
  then pi^{a_j} d_out(u_j) = d_out d_in(v_j) = 0 inside a free module, so
  u_j lies in ker(d_out); the u_j with finite a_j extend to a basis of the
  kernel, and ker/im splits off O/pi^{a_j} per finite pivot.

  free(H^i) = dim ker(d_out) - rank(d_in) by rank-nullity.  Group
  cohomology complexes are acyclic over the fraction field in positive
  degrees (cor o res = |G|), so callers computing them pass acyclic=True
  and the outgoing differential is never eliminated; otherwise its rank is
  computed the same way.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

import numpy as np

from .chainring import ChainRing
from .errors import BlockExtError, PrecisionUnstable
from .omodule import OModuleClass

_BATCH_MIN = 12  # below this, plain loops beat numpy dispatch


class ChainMatrix:
    """Dense matrix over a ChainRing, rows of element tuples."""

    def __init__(self, ring: ChainRing, rows: list[list[tuple]]):
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        assert all(len(r) == self.ncols for r in rows)

    @classmethod
    def zeros(cls, ring, m, n):
        return cls(ring, [[ring.zero] * n for _ in range(m)])

    @classmethod
    def identity(cls, ring, n):
        M = cls.zeros(ring, n, n)
        for i in range(n):
            M.rows[i][i] = ring.one
        return M

    def mul(self, other: "ChainMatrix") -> "ChainMatrix":
        assert self.ncols == other.nrows
        R = self.ring
        out = ChainMatrix.zeros(R, self.nrows, other.ncols)
        for i in range(self.nrows):
            for k in range(self.ncols):
                a = self.rows[i][k]
                if a == R.zero:
                    continue
                orow = other.rows[k]
                for j in range(other.ncols):
                    if orow[j] != R.zero:
                        out.rows[i][j] = R.add(out.rows[i][j], R.mul(a, orow[j]))
        return out

    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(v == z for row in self.rows for v in row)

    def to_entries(self) -> dict:
        z = self.ring.zero
        return {(i, j): v for i, row in enumerate(self.rows)
                for j, v in enumerate(row) if v != z}


def _np_safe(ring: ChainRing) -> bool:
    # int64 headroom for sum of dim^2 products of three coefficients
    return ring.pN <= (1 << 15) and ring.dim <= 16


def _sparse_axpy(ring, dst: dict, src_items, q, arr):
    """dst += q * src for sparse vectors; returns (changed keys, cached array).

    src_items is a stable list of (key, element); arr caches its numpy form
    across repeated calls with the same source (the pivot row).
    """
    changed = []
    zero = ring.zero
    if len(src_items) >= _BATCH_MIN and _np_safe(ring):
        if arr is None:
            arr = np.array([v for _, v in src_items], dtype=np.int64)
        qv = np.asarray(q, dtype=np.int64)
        delta = np.einsum("ld,e,kde->lk", arr, qv, ring.mult_tensor) % ring.pN
        for idx, (key, _) in enumerate(src_items):
            old = dst.get(key, zero)
            new = tuple((a + int(b)) % ring.pN for a, b in zip(old, delta[idx]))
            if new == zero:
                if key in dst:
                    del dst[key]
                    changed.append((key, None))
            else:
                dst[key] = new
                changed.append((key, new))
        return changed, arr
    for key, v in src_items:
        old = dst.get(key, zero)
        new = ring.add(old, ring.mul(q, v))
        if new == zero:
            if key in dst:
                del dst[key]
                changed.append((key, None))
        else:
            dst[key] = new
            changed.append((key, new))
    return changed, arr


def _smith_exponents(ring, rows: list[dict], threshold) -> list[int]:
    """Finite Smith exponents (pi-levels below threshold), ascending.

    rows is a list of sparse {col: element} dicts, consumed destructively.
    Pivoting is by global minimal valuation, tracked in a lazily revalidated
    heap; once no entry falls below the threshold the remaining block is
    truncation noise standing in for zero and the form is complete.
    """
    heap = []
    rows_of: dict[int, set] = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            rows_of.setdefault(j, set()).add(i)
            heap.append((ring.val(v), i, j))
    heapq.heapify(heap)
    cap = ring.cap
    active = set(range(len(rows)))
    exps = []
    while heap:
        val, i0, j0 = heapq.heappop(heap)
        if val >= threshold:
            break
        if i0 not in active:
            continue
        piv = rows[i0].get(j0)
        if piv is None:
            continue
        cur = ring.val(piv)
        if cur != val:
            if cur < cap:
                heapq.heappush(heap, (cur, i0, j0))
            continue
        # pivot found: clear column j0 from the other active rows
        piv_items = list(rows[i0].items())
        arr = None
        for i in sorted(rows_of.get(j0, ())):
            if i == i0 or i not in active:
                continue
            b = rows[i].get(j0)
            if b is None:
                continue
            q = ring.neg(ring.div_dominated(b, piv))
            changed, arr = _sparse_axpy(ring, rows[i], piv_items, q, arr)
            for key, new in changed:
                if new is None:
                    s = rows_of.get(key)
                    if s is not None:
                        s.discard(i)
                else:
                    rows_of.setdefault(key, set()).add(i)
                    heapq.heappush(heap, (ring.val(new), i, key))
            if rows[i].pop(j0, None) is not None:
                raise BlockExtError("dominated elimination left a residue")
        # with the column cleared, column operations kill the rest of row
        # i0 without touching other rows, so the row just retires
        exps.append(val)
        active.discard(i0)
    return exps


def snf_chain_ring(mat: ChainMatrix, threshold: int | None = None) -> list[int]:
    """All min(m, n) diagonal Smith exponents; cap stands for zero."""
    ring = mat.ring
    thr = (ring.cap + 1) // 2 if threshold is None else threshold
    rows = [{j: v for j, v in enumerate(row) if v != ring.zero}
            for row in mat.rows]
    exps = _smith_exponents(ring, rows, thr)
    exps.extend([ring.cap] * (min(mat.nrows, mat.ncols) - len(exps)))
    return exps


class ChainComplex:
    """A bounded complex of free modules over a ChainRing.

    ranks[i] is the rank at position i; diffs[i] maps position i to i+1 and
    is stored sparsely as {(row, col): element} with row < ranks[i+1] and
    col < ranks[i].
    """

    def __init__(self, ring: ChainRing, ranks: list[int], diffs: list[dict]):
        assert len(diffs) == len(ranks) - 1
        self.ring = ring
        self.ranks = list(ranks)
        self.diffs = [dict(d) for d in diffs]
        for i, d in enumerate(self.diffs):
            for (r, c) in d:
                assert 0 <= r < ranks[i + 1] and 0 <= c < ranks[i]

    def verify(self):
        """Check d o d = 0; raises on violation."""
        R = self.ring
        for i in range(len(self.diffs) - 1):
            lo, hi = self.diffs[i], self.diffs[i + 1]
            by_col: dict[int, list] = {}
            for (r2, c2), v2 in hi.items():
                by_col.setdefault(c2, []).append((r2, v2))
            acc: dict[tuple, tuple] = {}
            for (r, c), v in lo.items():
                for r2, v2 in by_col.get(r, ()):
                    key = (r2, c)
                    acc[key] = R.add(acc.get(key, R.zero), R.mul(v2, v))
            for key, v in acc.items():
                if v != R.zero:
                    raise BlockExtError(
                        f"d o d != 0 at positions {i},{i + 1}, entry {key}")
        return True


def _diff_smith(cx: ChainComplex, i: int, thr) -> list[int]:
    rows: list[dict] = [{} for _ in range(cx.ranks[i + 1])]
    for (r, c), v in cx.diffs[i].items():
        rows[r][c] = v
    return _smith_exponents(cx.ring, rows, thr)


def homology_of_complex(cx: ChainComplex, i: int,
                        threshold: int | None = None,
                        acyclic: bool = False) -> tuple[int, list[int]]:
    """(free rank, torsion pi-exponents desc) of H^i(cx).

    With acyclic=True the caller asserts the complex is exact over the
    fraction field in degrees >= 1 (true for group cohomology, by
    cor o res = |G|); the outgoing differential is then not needed and the
    top position i = len(diffs) becomes available.
    """
    ring = cx.ring
    top = len(cx.diffs)
    if not 0 <= i <= top:
        raise ValueError(f"position {i} outside complex")
    thr = (ring.cap + 1) // 2 if threshold is None else threshold
    if i == 0:
        rank_in, torsion = 0, []
    else:
        in_exps = _diff_smith(cx, i - 1, thr)
        rank_in = len(in_exps)
        torsion = sorted((a for a in in_exps if a > 0), reverse=True)
    if acyclic and i >= 1:
        free = 0
    else:
        if i == top:
            rank_out = 0
        else:
            rank_out = len(_diff_smith(cx, i, thr))
        free = cx.ranks[i] - rank_out - rank_in
        if free < 0:
            raise PrecisionUnstable(
                "negative free rank from truncated Smith forms; "
                "increase the working precision")
    return free, torsion


def homology_class(builder, i: int, *, threshold: int | None = None,
                   acyclic: bool = False, reverify: bool = True) -> OModuleClass:
    """O-module class of H^i, re-verified at higher precision.

    builder(extra) must return a ChainComplex over a ring with precision
    N + extra; the classes at N and N + 2 must agree or the computation is
    declared unstable.
    """
    cx = builder(0)
    ring = cx.ring
    free, tors = homology_of_complex(cx, i, threshold, acyclic)
    cls = OModuleClass(ring.p, free,
                       tuple(Fraction(t, ring.e) for t in tors))
    if reverify:
        cx2 = builder(2)
        if cx2.ring.N != ring.N + 2:
            raise BlockExtError("reverify builder ignored the extra precision")
        thr2 = None if threshold is None else threshold + 2 * cx2.ring.e
        free2, tors2 = homology_of_complex(cx2, i, thr2, acyclic)
        cls2 = OModuleClass(cx2.ring.p, free2,
                            tuple(Fraction(t, cx2.ring.e) for t in tors2))
        if cls != cls2:
            raise PrecisionUnstable(
                f"homology class changed under precision increase: "
                f"{cls.pretty()} vs {cls2.pretty()}")
    return cls
