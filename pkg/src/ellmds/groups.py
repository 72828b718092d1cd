"""Finite abelian groups Z/d x Z/e: structure of E(F_q), index-2 subgroups, k-sumsets.

Every element of a :class:`GroupTable` has an integer *label* ``i*e + j`` for
the element ``i*g1 + j*g2``.  Group operations work on labels, which keeps
membership tests O(1) and lets the sumset dynamic programme run on numpy
boolean vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd, isqrt
from typing import Any, Hashable, Sequence

import numpy as np

from .errors import BudgetExceeded, DuplicateElements, InadmissibleCount
from .fields import factorize

TABLE_BUDGET = 5000


def _vl(n: int, l: int) -> int:
    v = 0
    while n and n % l == 0:
        n //= l
        v += 1
    return v


# -- isogeny classes and structures ---------------------------------------------


def _is_square_power(p: int, n: int) -> int | None:
    return p ** (n // 2) if n % 2 == 0 else None


def admissible_traces(p: int, n: int) -> set[int]:
    """Traces t, |t| <= 2 sqrt(q), of isogeny classes of elliptic curves over GF(p^n)."""
    q = p ** n
    bound = isqrt(4 * q)
    out = set()
    rq = _is_square_power(p, n)
    for t in range(-bound, bound + 1):
        if gcd(t, p) == 1:
            out.add(t)                                     # (i)
        elif n % 2 == 0 and abs(t) == 2 * rq:
            out.add(t)                                     # (ii)
        elif n % 2 == 0 and p % 3 != 1 and abs(t) == rq:
            out.add(t)                                     # (iii)
        elif n % 2 == 1 and p in (2, 3) and abs(t) == p ** ((n + 1) // 2):
            out.add(t)                                     # (iv)
        elif t == 0 and (n % 2 == 1 or p % 4 != 1):
            out.add(t)                                     # (v)
    return out


def trace_case(p: int, n: int, t: int) -> str:
    """Which admissibility case t falls under: 'i'..'v'; raises if none."""
    if t not in admissible_traces(p, n):
        raise InadmissibleCount(f"t = {t} is not admissible for q = {p}^{n}")
    if gcd(t, p) == 1:
        return "i"
    rq = _is_square_power(p, n)
    if n % 2 == 0 and abs(t) == 2 * rq:
        return "ii"
    if n % 2 == 0 and abs(t) == rq:
        return "iii"
    if t == 0:
        return "v"
    return "iv"


def possible_structures(p: int, n: int, N: int) -> list[tuple[int, int]]:
    """All (d, e), d | e, d*e = N, allowed for E(GF(p^n)) with N points."""
    q = p ** n
    case = trace_case(p, n, q + 1 - N)
    ranges = []
    for l, h in sorted(factorize(N).items()):
        if l == p:
            ranges.append((l, [0]))
        elif case == "ii":
            if h % 2:
                return []
            ranges.append((l, [h // 2]))
        else:
            ranges.append((l, list(range(0, min(_vl(q - 1, l), h // 2) + 1))))
    out = [1]
    for l, choices in ranges:
        out = [d * l ** a for d in out for a in choices]
    return sorted((d, N // d) for d in out)


def gcd_plus_minus(p: int, r: int, s: int) -> int:
    """Closed form of gcd(p^r + 1, p^s - 1)."""
    g = gcd(r, s)
    if (s // g) % 2 == 1:
        return 1 if p % 2 == 0 else 2
    return p ** g + 1


def predict_cyclic_binary_maximal(m: int) -> bool:
    """Sufficient condition for E(GF(2^(2m))) with N = q + 2 sqrt(q) to be cyclic."""
    return m % 2 == 1 or m % 6 in (0, 2)


# -- group tables -----------------------------------------------------------------


@dataclass(eq=False)
class GroupTable:
    """Z/d x Z/e with explicit elements; ``elements[lab]`` is the element with label lab.

    ``order`` lists the elements in their natural (enumeration) order, which
    is the order used for every deterministic choice.
    """

    d: int
    e: int
    elements: list[Any]
    index: dict[Hashable, int]
    order: list[Any]
    g1: Any = None
    g2: Any = None
    curve: Any = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def N(self) -> int:
        return self.d * self.e

    @property
    def invariant_factors(self) -> tuple[int, int]:
        return (self.d, self.e)

    @property
    def identity(self):
        return self.elements[0]

    def label(self, x) -> int:
        return self.index[x]

    def labels(self, xs) -> np.ndarray:
        return np.array([self.index[x] for x in xs], dtype=np.int64)

    def coords(self, x) -> tuple[int, int]:
        return divmod(self.index[x], self.e)

    def add_labels(self, a, b):
        d, e = self.d, self.e
        ia, ja = np.divmod(a, e)
        ib, jb = np.divmod(b, e)
        return ((ia + ib) % d) * e + (ja + jb) % e

    def neg_labels(self, a):
        d, e = self.d, self.e
        i, j = np.divmod(a, e)
        return ((-i) % d) * e + (-j) % e

    def add(self, x, y):
        return self.elements[int(self.add_labels(self.index[x], self.index[y]))]

    def neg(self, x):
        return self.elements[int(self.neg_labels(self.index[x]))]

    def sum(self, xs):
        lab = 0
        for x in xs:
            lab = int(self.add_labels(lab, self.index[x]))
        return self.elements[lab]

    def mul(self, m: int, x):
        i, j = self.coords(x)
        return self.elements[((m * i) % self.d) * self.e + (m * j) % self.e]

    @property
    def two_torsion(self) -> list[Any]:
        return [x for x in self.order if self.mul(2, x) == self.identity]

    @classmethod
    def synthetic(cls, d: int, e: int) -> GroupTable:
        if d < 1 or e % d:
            raise ValueError("need d | e")
        elems = [(i, j) for i in range(d) for j in range(e)]
        index = {x: n for n, x in enumerate(elems)}
        return cls(d, e, elems, index, list(elems), g1=(1 % d, 0), g2=(0, 1 % e))

    def to_json(self) -> dict:
        from .serialize import point_to_json
        enc = point_to_json if self.curve is not None else list
        return {"N": self.N, "invariant_factors": [self.d, self.e],
                "g1": enc(self.g1), "g2": enc(self.g2)}


def _point_order(curve, P, N: int, primes) -> int:
    n = N
    for l in primes:
        while n % l == 0 and curve.mul_unchecked(n // l, P).x is None:
            n //= l
    return n


def group_table(curve, budget: int = TABLE_BUDGET) -> GroupTable:
    """Structure of E(F_q) with generators found by a deterministic scan.

    g2 is the first point (in enumeration order) of maximal order e; g1 is the
    first point of order d = N/e with <g1> and <g2> independent.  The table is
    certified by checking that i*g1 + j*g2 enumerates every point once.
    """
    cached = curve._cache.get("group")
    if cached is not None:
        return cached
    from .curves import enumerate_points

    N = curve.order()
    if N > budget:
        raise BudgetExceeded(f"N = {N} exceeds the group-table budget {budget}")
    pts, _ = enumerate_points(curve)
    F = curve.field
    structs = possible_structures(F.p, F.abs_degree, N)
    e_max = max(e for _, e in structs)
    primes = sorted(factorize(N))
    orders: dict = {}
    best, e = None, 0
    for P in pts:
        o = _point_order(curve, P, N, primes)
        orders[P] = o
        if o > e:
            best, e = P, o
            if e == e_max:
                break
    d = N // e
    g2 = best
    cyc = [curve.O]
    R = g2
    while R.x is not None:
        cyc.append(R)
        R = curve.add_unchecked(R, g2)
    cyc_set = set(cyc)
    g1 = curve.O
    if d > 1:
        for P in pts:
            o = orders.get(P)
            if o is None:
                o = orders[P] = _point_order(curve, P, N, primes)
            if o != d:
                continue
            R, ok = P, True
            for _ in range(d - 1):
                if R in cyc_set:
                    ok = False
                    break
                R = curve.add_unchecked(R, P)
            if ok:
                g1 = P
                break
        else:
            raise AssertionError("no independent generator found")
    elements = []
    row = curve.O
    for _ in range(d):
        R = row
        for _ in range(e):
            elements.append(R)
            R = curve.add_unchecked(R, g2)
        row = curve.add_unchecked(row, g1)
    index = {P: n for n, P in enumerate(elements)}
    if len(index) != N or set(pts) != set(index):
        raise AssertionError("generators do not certify the group structure")
    if (d, e) not in structs:
        raise AssertionError(f"structure {(d, e)} not among the possible {structs}")
    G = GroupTable(d, e, elements, index, list(pts), g1=g1, g2=g2, curve=curve)
    curve._cache["group"] = G
    return G


# -- subgroups -----------------------------------------------------------------------


@dataclass(eq=False)
class Subgroup:
    parent: GroupTable
    mask: np.ndarray  # boolean over labels
    character: tuple[int, int] | None = None
    generators: tuple = ()

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @property
    def index(self) -> int:
        return self.parent.N // self.size

    def __contains__(self, x) -> bool:
        return bool(self.mask[self.parent.index[x]])

    @property
    def elements(self) -> list[Any]:
        G = self.parent
        return [x for x in G.order if self.mask[G.index[x]]]

    def coset(self, u) -> list[Any]:
        """u + H, in the parent's natural order."""
        G = self.parent
        shifted = np.zeros_like(self.mask)
        labs = np.nonzero(self.mask)[0]
        shifted[G.add_labels(labs, G.index[u])] = True
        return [x for x in G.order if shifted[G.index[x]]]

    def to_json(self) -> dict:
        out: dict = {"index": self.index}
        if self.character is not None:
            out["character"] = list(self.character)
        if self.generators:
            G = self.parent
            out["generators"] = [list(G.coords(g)) for g in self.generators]
        return out


def index2_subgroups(G: GroupTable) -> list[Subgroup]:
    """Kernels of the nontrivial characters G -> Z/2, characters ordered (0,1), (1,0), (1,1)."""
    labs = np.arange(G.N)
    i, j = np.divmod(labs, G.e)
    out = []
    for c1, c2 in ((0, 1), (1, 0), (1, 1)):
        if (c1 and G.d % 2) or (c2 and G.e % 2):
            continue
        mask = (c1 * i + c2 * j) % 2 == 0
        out.append(Subgroup(G, mask, character=(c1, c2)))
    return out


def subgroup_generated(G: GroupTable, gens: Sequence[Any]) -> Subgroup:
    mask = np.zeros(G.N, dtype=bool)
    mask[0] = True
    frontier = [0]
    glabs = [G.index[g] for g in gens]
    while frontier:
        nxt = []
        for lab in frontier:
            for g in glabs:
                s = int(G.add_labels(lab, g))
                if not mask[s]:
                    mask[s] = True
                    nxt.append(s)
        frontier = nxt
    return Subgroup(G, mask, generators=tuple(gens))


def find_character(H: Subgroup) -> tuple[int, int] | None:
    """The character whose kernel is H, if H has index 2."""
    for K in index2_subgroups(H.parent):
        if np.array_equal(K.mask, H.mask):
            return K.character
    return None


def coset_of_index2(G: GroupTable, xs) -> tuple[Subgroup, Any] | None:
    """If the set xs is exactly a coset u + H of an index-2 subgroup, return (H, u)."""
    labs = set(G.index[x] for x in xs)
    if len(labs) * 2 != G.N:
        return None
    for H in index2_subgroups(G):
        members = set(np.nonzero(H.mask)[0].tolist())
        if labs == members:
            return H, G.identity
        if not labs & members:
            return H, next(x for x in G.order if G.index[x] in labs)
    return None


# -- k-sumsets ---------------------------------------------------------------------------


@dataclass
class SumsetResult:
    mask: np.ndarray
    _history: list[np.ndarray] | None
    _labels: np.ndarray
    _group: GroupTable
    k: int

    def __contains__(self, x) -> bool:
        return bool(self.mask[self._group.index[x]])

    def elements(self) -> set:
        G = self._group
        return {G.elements[i] for i in np.nonzero(self.mask)[0]}

    def witness(self, target) -> list[Any] | None:
        """k distinct elements of S summing to target, or None."""
        G = self._group
        g = G.index[target]
        if not self.mask[g]:
            return None
        if self._history is None:
            raise ValueError("sumset computed without history")
        j = self.k
        chosen = []
        for idx in range(len(self._labels) - 1, -1, -1):
            if j == 0:
                break
            prev = self._history[idx]
            if prev[j, g]:
                continue
            s = int(self._labels[idx])
            chosen.append(G.elements[s])
            g = int(G.add_labels(g, G.neg_labels(s)))
            j -= 1
        assert j == 0 and g == 0
        return list(reversed(chosen))


def k_sumset(S: Sequence[Any], k: int, G: GroupTable, keep_history: bool = True) -> SumsetResult:
    """Exact set of sums of k distinct elements of S."""
    labels = G.labels(S)
    if len(set(labels.tolist())) != len(labels):
        raise DuplicateElements("S has repeated elements")
    if not 0 <= k <= len(labels):
        raise ValueError(f"k = {k} out of range for |S| = {len(labels)}")
    N = G.N
    f = np.zeros((k + 1, N), dtype=bool)
    f[0, 0] = True
    base = np.arange(N)
    history = [] if keep_history else None
    for idx, s in enumerate(labels):
        if keep_history:
            history.append(f.copy())
        perm = G.add_labels(base, s)
        top = min(k, idx + 1)
        shifted = np.zeros((top, N), dtype=bool)
        shifted[:, perm] = f[:top]
        f[1:top + 1] |= shifted
    return SumsetResult(f[k].copy(), history, labels, G, k)
