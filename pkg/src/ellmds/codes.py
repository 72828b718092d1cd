"""Elliptic codes C(E, D, G): specs, generator matrices and MDS verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Any

import numpy as np

from .curves import Curve, Point
from .errors import BudgetExceeded, DimensionMismatch, EchelonNotRational
from .fields import FiniteField
from .functions import evaluate_int, rr_basis
from .groups import GroupTable, k_sumset
from .minors import exhaustive_minors, rank, rref, sampled_minors
from .places import Divisor, divisor_sum

DISTANCE_BUDGET = 10 ** 6


@dataclass
class CodeSpec:
    curve: Curve
    D: list[Point]
    G: Divisor
    provenance: dict[str, Any] = dc_field(default_factory=dict)

    @property
    def field(self) -> FiniteField:
        return self.curve.field

    @property
    def n(self) -> int:
        return len(self.D)

    @property
    def k(self) -> int:
        return self.G.degree

    def validate(self) -> None:
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < deg G < n, got k = {self.k}, n = {self.n}")
        if len(set(self.D)) != self.n:
            raise ValueError("evaluation points are not distinct")
        F = self.field
        for P in self.D:
            if not P.is_rational_over(F) or not self.curve.is_on_curve(P):
                raise ValueError(f"{P} is not a rational point of the curve")
        geo = self.G.geometric()
        if any(P in geo for P in self.D):
            raise ValueError("Supp(G) meets D")

    @property
    def degenerate(self) -> bool:
        """k = 1 codes are flagged rather than treated as ordinary elliptic codes."""
        return self.k == 1


@dataclass
class GenMatrix:
    field: FiniteField
    rows: np.ndarray  # k x n element ints
    provenance: dict[str, Any] = dc_field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def __eq__(self, other):
        return (isinstance(other, GenMatrix) and self.field is other.field
                and np.array_equal(self.rows, other.rows))


@dataclass
class Verdict:
    mds: bool
    method: str
    witness: list[int] | None = None  # column indices of a bad k-subset, or codeword support
    details: dict[str, Any] = dc_field(default_factory=dict)

    @property
    def label(self) -> str:
        return "MDS" if self.mds else "NotMDS"

    def to_json(self) -> dict:
        out = {"verdict": self.label, "method": self.method}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        out.update(self.details)
        return out


def evaluation_matrix(spec: CodeSpec, basis=None) -> tuple[FiniteField, list[list[int]]]:
    basis = rr_basis(spec.curve, spec.G) if basis is None else basis
    K = spec.field
    for f in basis:
        if f.field.q > K.q:
            K = f.field
    return K, [[evaluate_int(f, P) for P in spec.D] for f in basis]


def generator_matrix(spec: CodeSpec) -> GenMatrix:
    """k x n generator matrix over F_q (row-reduced when L(G) needs an extension)."""
    spec.validate()
    F = spec.field
    K, rows = evaluation_matrix(spec)
    if K is not F:
        rows = rref(K, rows)
        for r in rows:
            for v in r:
                if v >= F.q:
                    raise EchelonNotRational("echelon form has entries outside the base field")
        form = "rref"
    else:
        form = "evaluations"
    M = np.array(rows, dtype=np.int64).reshape(spec.k, spec.n)
    if rank(F, M.tolist()) != spec.k:
        raise DimensionMismatch("generator matrix is rank deficient")
    return GenMatrix(F, M, {"n": spec.n, "k": spec.k, "form": form, **spec.provenance})


# -- verifiers ---------------------------------------------------------------------------


def mds_combinatorial(spec: CodeSpec, G_table: GroupTable) -> Verdict:
    """NotMDS iff sum(G) is a sum of k distinct points of D."""
    k, n = spec.k, spec.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k = {k} outside 1..n-1")
    s = divisor_sum(spec.G)
    res = k_sumset(spec.D, k, G_table)
    if s not in res:
        return Verdict(True, "combinatorial", details={"sum_G": s})
    pts = res.witness(s)
    pos = {P: i for i, P in enumerate(spec.D)}
    return Verdict(False, "combinatorial", sorted(pos[P] for P in pts), {"sum_G": s})


def minimum_distance(M: GenMatrix, budget: int = DISTANCE_BUDGET) -> tuple[int, list[int]]:
    """Exact minimum distance by enumerating all q^k codewords; returns (d, a minimum codeword)."""
    F, A = M.field, M.rows
    k, n = A.shape
    if F.q ** k > budget:
        raise BudgetExceeded(f"q^k = {F.q ** k} codewords exceeds {budget}")
    best, best_word = n + 1, None
    # messages in chunks over the leading coordinate to keep memory bounded
    rest = np.array(list(product(range(F.q), repeat=k - 1)), dtype=np.int64)
    rest = rest.reshape(len(rest), k - 1)
    for lead in range(F.q):
        msgs = np.hstack([np.full((len(rest), 1), lead, dtype=np.int64), rest])
        words = np.zeros((len(msgs), n), dtype=np.int64)
        for r in range(k):
            words = F.vadd(words, F.vmul(msgs[:, r:r + 1], A[r:r + 1, :]))
        wt = (words != 0).sum(axis=1)
        nonzero = msgs.any(axis=1)
        wt = np.where(nonzero, wt, n + 1)
        i = int(np.argmin(wt))
        if wt[i] < best:
            best, best_word = int(wt[i]), words[i].tolist()
    return best, best_word


def mds_matrix(M: GenMatrix, mode: str = "exhaustive_minors", count: int = 10 ** 5, seed: int = 0,
               threads: int = 1) -> Verdict:
    """MDS check from the generator matrix alone."""
    F, A = M.field, M.rows
    k, n = A.shape
    if mode == "exhaustive_minors":
        hit, covered = exhaustive_minors(F, A, threads=threads)
        return Verdict(hit is None, mode, None if hit is None else list(hit), {"minors": covered})
    if mode == "sampled_minors":
        hit, covered = sampled_minors(F, A, count, seed)
        return Verdict(hit is None, mode, None if hit is None else list(hit),
                       {"minors": covered, "seed": seed})
    if mode == "exhaustive_distance":
        d, word = minimum_distance(M)
        mds = d == n - k + 1
        zeros = [i for i, v in enumerate(word) if v == 0]
        return Verdict(mds, mode, None if mds else zeros, {"d": d})
    raise ValueError(f"unknown mode {mode!r}")


def code_parameters(M: GenMatrix) -> tuple[int, int, int]:
    d, _ = minimum_distance(M)
    return M.n, M.k, d
