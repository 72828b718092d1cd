"""MEC bound calculator, the two maximum-length constructions and a structural auditor."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field as dc_field
from math import isqrt

from .codes import CodeSpec, mds_combinatorial
from .curves import Curve, default_search
from .errors import (
    ConstructionFailedMDS,
    NoWitnessFound,
    NotDegreeThree,
    OddGroupOrder,
    PreconditionFailed,
    WrongCurveShape,
)
from .fields import make_field, prime_power
from .groups import GroupTable, coset_of_index2, group_table, index2_subgroups
from .places import Divisor, Place, find_degree3_avoid, find_degree3_trace, place_sum

# (n as a function of q and s = floor(2 sqrt q), human-readable form), numbered as in the table
TABLE_ROWS = {
    1: "(q+1+2*sqrt(q))/2; q odd square; k odd; unrestricted",
    2: "(q+1+s)/2; q+1+s even; k odd; unrestricted",
    3: "(q+1+s)/2 - 1; q+1+s even; k even; Supp(G) rational",
    4: "(q+1+s)/2; q+1+s even; k even; unrestricted",
    5: "(q+s)/2; q+1+s odd; k odd; unrestricted",
    6: "(q+s)/2 - 1; q+1+s odd; k even; Supp(G) rational",
    7: "(q+s)/2; q+1+s odd; k even; unrestricted",
    8: "2^(a-1) + 2^(a/2) - 1; q = 2^a, a even; k even; Supp(G) rational",
    9: "2^(a-1) + 2^(a/2); q = 2^a, a even; k even; unrestricted",
    10: "2^(a-1) + 2^(a/2); q = 2^a, a even; k odd; unrestricted",
}


@dataclass
class BoundResult:
    q: int
    k: int
    restricted: bool
    parity_regime: str
    value: int
    citation: str
    also_matches: list[str]
    preconditions_ok: bool
    reasons: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def bound_preconditions(q: int, k: int) -> list[str]:
    """Reasons the bound table does not apply (empty when it does)."""
    reasons = []
    if q < 289:
        reasons.append("q >= 289 fails")
    if k < 3:
        reasons.append("k >= 3 fails")
    # 10k <= q + 1 - 2 sqrt(q), decided exactly
    m = q + 1 - 10 * k
    if m < 0 or m * m < 4 * q:
        reasons.append("k <= (q+1-2*sqrt(q))/10 fails")
    return reasons


def mec_bound(q: int, k: int, restricted: bool = False, strict: bool = True) -> BoundResult:
    """Maximal length of a nontrivial MDS elliptic code of dimension k over GF(q)."""
    pp = prime_power(q)
    if pp is None:
        raise PreconditionFailed(f"q = {q} is not a prime power")
    reasons = bound_preconditions(q, k)
    if reasons and strict:
        raise PreconditionFailed("; ".join(reasons))
    s = isqrt(4 * q)
    even = (q + 1 + s) % 2 == 0
    k_even = k % 2 == 0
    if even:
        base = (q + 1 + s) // 2
        row = 2 if not k_even else (3 if restricted else 4)
    else:
        base = (q + s) // 2
        row = 5 if not k_even else (6 if restricted else 7)
    value = base - 1 if (k_even and restricted) else base
    also = []
    p, a = pp
    r = isqrt(q)
    if p != 2 and a % 2 == 0 and not k_even:
        assert value == (q + 1 + 2 * r) // 2
        also.append("Table 1 row 1")
    if p == 2 and a % 2 == 0:
        alt = 2 ** (a - 1) + 2 ** (a // 2)
        if k_even and restricted:
            assert value == alt - 1
            also.append("Table 1 row 8")
        else:
            assert value == alt
            also.append("Table 1 row 9" if k_even else "Table 1 row 10")
    return BoundResult(q, k, restricted, "even" if even else "odd", value, f"Table 1 row {row}",
                       also, not reasons, reasons)


def target_order(q: int) -> int:
    """N of the curves the maximum-length constructions live on."""
    s = isqrt(4 * q)
    return q + 1 + s if (q + 1 + s) % 2 == 0 else q + s


def _first_index2(G_table: GroupTable):
    if G_table.N % 2:
        raise OddGroupOrder(f"N = {G_table.N} is odd: no subgroup of index 2")
    H = index2_subgroups(G_table)[0]
    u = next(x for x in G_table.order if x not in H)
    return H, u


def _require_mds(spec: CodeSpec, G_table: GroupTable) -> CodeSpec:
    v = mds_combinatorial(spec, G_table)
    if not v.mds:
        raise ConstructionFailedMDS(f"{spec.provenance.get('construction')} produced a non-MDS code")
    return spec


def construct_coset_code(curve: Curve, G_table: GroupTable, k: int, allow_odd_k: bool = False) -> CodeSpec:
    """Rational-support code of length N/2 - 1: D = (u+H) minus u, G = (k+1)[O] - [u].

    With ``allow_odd_k`` an odd k gives the full-coset code D = u+H, G = k[O]
    (length N/2), the rational-support optimum for odd k.
    """
    if k < 3:
        raise PreconditionFailed("k >= 3 required")
    H, u = _first_index2(G_table)
    O = curve.O
    prov = {"construction": "coset", "character": list(H.character), "u": u, "k": k}
    if k % 2 == 0:
        D = [P for P in H.coset(u) if P != u]
        G = Divisor(curve, [(O, k + 1), (u, -1)])
    elif allow_odd_k:
        D = H.coset(u)
        G = Divisor(curve, [(O, k)])
        prov["construction"] = "coset-odd-k"
    else:
        raise PreconditionFailed("odd k needs allow_odd_k")
    spec = CodeSpec(curve, D, G, prov)
    spec.validate()
    return _require_mds(spec, G_table)


def construct_deg3_code(curve: Curve, G_table: GroupTable, k: int, R: Place) -> CodeSpec:
    """Length-N/2 code using a degree-3 place R with sum([R]) = O."""
    if R.degree != 3:
        raise NotDegreeThree(f"place has degree {R.degree}")
    if place_sum(curve, R).x is not None:
        raise PreconditionFailed("sum([R]) is not O")
    if k < 3:
        raise PreconditionFailed("k >= 3 required")
    H, u = _first_index2(G_table)
    O = curve.O
    prov = {"construction": "degree-3", "character": list(H.character), "u": u, "k": k}
    if k % 2 == 0:
        D = H.elements
        extra = H.coset(u)[: k - 3]
        G = Divisor(curve, [(R, 1)] + [(P, 1) for P in extra])
    else:
        D = H.coset(u)
        G = Divisor(curve, [(R, 1), (O, k - 3)])
    spec = CodeSpec(curve, D, G, prov)
    spec.validate()
    return _require_mds(spec, G_table)


def find_degree3_place(curve: Curve, seed: int = 0) -> tuple[Place, str]:
    """Avoidance method when the curve shape permits, sampling the trace kernel otherwise."""
    try:
        R, _ = find_degree3_avoid(curve)
        return R, "avoid"
    except (WrongCurveShape, NoWitnessFound):
        return find_degree3_trace(curve, seed=seed), "trace"


def build_max_code(p: int, a: int, k: int, restricted: bool = False, seed: int = 0) -> CodeSpec:
    """A maximum-length MDS elliptic code over GF(p^a) matching the bound table."""
    q = p ** a
    bound = mec_bound(q, k, restricted)
    F = make_field(p, a)
    N = target_order(q)
    curve, strategy = default_search(F, N)
    G_table = group_table(curve)
    if restricted:
        spec = construct_coset_code(curve, G_table, k, allow_odd_k=True)
    else:
        R, method = find_degree3_place(curve, seed)
        spec = construct_deg3_code(curve, G_table, k, R)
        spec.provenance["place_method"] = method
        if R.witness_b is not None:
            spec.provenance["witness_b"] = R.witness_b
    if spec.n != bound.value:
        raise ConstructionFailedMDS(f"length {spec.n} differs from the bound {bound.value}")
    spec.provenance.update({"seed": seed, "curve_search": strategy, "restricted": restricted,
                            "bound_citation": bound.citation})
    return spec


# -- audit ---------------------------------------------------------------------------------


@dataclass
class AuditReport:
    N: int
    n: int
    k: int
    half_length: bool
    d_is_coset: bool
    coset_character: list[int] | None
    has_higher_degree_place: bool
    k_parity: str
    even_theorem_applies: bool
    odd_regime: bool
    prediction: str | None
    degenerate: bool

    def to_json(self) -> dict:
        return asdict(self)


def audit_code(spec: CodeSpec, G_table: GroupTable) -> AuditReport:
    """Report the structural conditions of the length theorems (no converse claims)."""
    N, n, k = G_table.N, spec.n, spec.k
    half = 2 * n == N
    cos = coset_of_index2(G_table, spec.D)
    higher = spec.G.has_nonrational_support()
    two = len(G_table.two_torsion)
    even_applies = (half and N >= 30 * two + 135 and k % 2 == 0 and 3 <= k and 10 * k <= N)
    odd_regime = (N % 2 == 1 and N >= 165 and 5 * n >= 2 * N + 5 and 3 <= k
                  and 5 * k <= 5 * n - 2 * N + 10)
    prediction = None
    if odd_regime or (even_applies and (cos is None or not higher)):
        prediction = "NotMDS"
    return AuditReport(N, n, k, half, cos is not None,
                       None if cos is None else list(cos[0].character), higher,
                       "even" if k % 2 == 0 else "odd", even_applies, odd_regime, prediction,
                       spec.degenerate)

