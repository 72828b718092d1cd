"""Batched determinants over table fields and the exhaustive k-minor scan.

The exhaustive scan avoids computing C(n, k) determinants one by one.  For
each (k-1)-subset S of columns it computes the cofactor vector w of the
k x (k-1) block M[:, S], so that det(M[:, S + {c}]) = w . M[:, c] for every
remaining column c.  A single field "matrix-vector" product then decides all
k-subsets whose largest column is c > max(S), so every k-subset is examined
exactly once.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, islice
from math import comb

import numpy as np

from .errors import BudgetExceeded
from .fields import FiniteField

MINOR_BUDGET = 10 ** 9


def batched_det(F: FiniteField, A: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square matrices, shape (B, s, s) -> (B,)."""
    A = np.array(A, dtype=np.int64, copy=True)
    B, s, _ = A.shape
    det = np.ones(B, dtype=np.int64)
    idx = np.arange(B)
    for col in range(s):
        nz = A[:, col:, col] != 0
        has = nz.any(axis=1)
        piv = np.argmax(nz, axis=1) + col
        swap = piv != col
        if swap.any():
            rc = A[idx, col].copy()
            A[idx, col] = A[idx, piv]
            A[idx, piv] = rc
            det = np.where(swap, F.vneg(det), det)
        p = np.where(has, A[:, col, col], 1)
        det = np.where(has, F.vmul(det, p), 0)
        inv = F.vinv(p)
        pivot_row = A[:, col, col:]
        for r in range(col + 1, s):
            f = F.vmul(A[:, r, col], inv)
            A[:, r, col:] = F.vsub(A[:, r, col:], F.vmul(f[:, None], pivot_row))
    return det


def cofactor_vectors(F: FiniteField, M: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    """w with det([M[:, S] | c]) = sum_r w[r] * c[r], for each row S of subsets."""
    k = M.shape[0]
    B = subsets.shape[0]
    blocks = M[:, subsets]                      # (k, B, k-1)
    blocks = np.transpose(blocks, (1, 0, 2))    # (B, k, k-1)
    W = np.empty((B, k), dtype=np.int64)
    for r in range(k):
        rows = [i for i in range(k) if i != r]
        if k == 1:
            d = np.ones(B, dtype=np.int64)
        else:
            d = batched_det(F, blocks[:, rows, :])
        W[:, r] = F.vneg(d) if (r + k - 1) % 2 else d
    return W


def field_matmul(F: FiniteField, W: np.ndarray, M: np.ndarray) -> np.ndarray:
    """(B, k) @ (k, n) over F."""
    acc = F.vmul(W[:, 0:1], M[0:1, :])
    for r in range(1, W.shape[1]):
        acc = F.vadd(acc, F.vmul(W[:, r:r + 1], M[r:r + 1, :]))
    return acc


def _scan_batch(F: FiniteField, M: np.ndarray, subsets: np.ndarray):
    n = M.shape[1]
    W = cofactor_vectors(F, M, subsets)
    vals = field_matmul(F, W, M)
    later = np.arange(n)[None, :] > subsets[:, -1:]
    bad = (vals == 0) & later
    if not bad.any():
        return None
    row = int(np.argmax(bad.any(axis=1)))
    c = int(np.argmax(bad[row]))
    return tuple(int(v) for v in subsets[row]) + (c,)


def exhaustive_minors(F: FiniteField, M: np.ndarray, batch: int = 20000, threads: int = 1,
                      budget: int = MINOR_BUDGET) -> tuple[tuple[int, ...] | None, int]:
    """First singular k-minor (column indices) or None, and the number of minors covered."""
    M = np.asarray(M, dtype=np.int64)
    k, n = M.shape
    total = comb(n, k)
    if total > budget:
        raise BudgetExceeded(f"C({n},{k}) = {total} minors exceeds the budget {budget}")
    if k == 1:
        zero = np.nonzero(M[0] == 0)[0]
        return ((int(zero[0]),) if len(zero) else None), total
    subsets_iter = combinations(range(n - 1), k - 1)

    def batches():
        while True:
            chunk = list(islice(subsets_iter, batch))
            if not chunk:
                return
            yield np.array(chunk, dtype=np.int64)

    if threads <= 1:
        for S in batches():
            hit = _scan_batch(F, M, S)
            if hit is not None:
                return hit, total
        return None, total
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # submit in waves of `threads` and report the earliest hit in iteration order
        it = batches()
        while True:
            wave = list(islice(it, threads))
            if not wave:
                return None, total
            for hit in pool.map(lambda S: _scan_batch(F, M, S), wave):
                if hit is not None:
                    return hit, total


def sampled_minors(F: FiniteField, M: np.ndarray, count: int, seed: int = 0,
                   batch: int = 50000) -> tuple[tuple[int, ...] | None, int]:
    """Determinants of ``count`` seeded random k-subsets; first singular one or None."""
    M = np.asarray(M, dtype=np.int64)
    k, n = M.shape
    rng = np.random.default_rng(seed)
    done = 0
    while done < count:
        b = min(batch, count - done)
        cols = np.sort(rng.integers(0, n, size=(2 * b + 64, k)), axis=1)
        distinct = (np.diff(cols, axis=1) > 0).all(axis=1)
        cols = cols[distinct][:b]
        b = len(cols)
        blocks = np.transpose(M[:, cols], (1, 0, 2))
        dets = batched_det(F, blocks)
        zero = np.nonzero(dets == 0)[0]
        if len(zero):
            return tuple(int(v) for v in cols[zero[0]]), done + int(zero[0]) + 1
        done += b
    return None, done


def rank(F: FiniteField, rows: list[list[int]]) -> int:
    """Rank of a matrix of element ints."""
    return sum(1 for r in rref(F, rows) if any(r))


def rref(F: FiniteField, rows: list[list[int]]) -> list[list[int]]:
    A = [list(r) for r in rows]
    rk = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rk, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        inv = F.inv(A[rk][c])
        A[rk] = [F.mul(v, inv) for v in A[rk]]
        for r in range(len(A)):
            if r != rk and A[r][c]:
                f = A[r][c]
                A[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[r], A[rk])]
        rk += 1
        if rk == len(A):
            break
    return A
