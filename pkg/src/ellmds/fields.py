"""Exact arithmetic in GF(p^a) and in towers GF(q) < GF(q^d).

Elements are stored as plain ints.  A field ``K = B[w]/(m(w))`` of degree ``d``
over its base ``B`` packs the coefficient vector ``(c_0, ..., c_{d-1})`` as
``sum(c_i * |B|**i)``, recursively down to the prime field.  A consequence we
lean on everywhere: every subfield in a tower embeds by the identity on ints,
and an element of ``K`` lies in ``B`` exactly when its int is below ``|B|``.

Fields with at most ``TABLE_LIMIT`` elements get log/antilog tables (plus
Zech logarithms for addition in odd characteristic) and vectorised numpy
kernels; larger fields (only ever the cubic extensions used for degree-3
places) fall back to polynomial arithmetic over their base.
"""

from __future__ import annotations

import operator
import random
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateEquation,
    DivisionByZero,
    MixedContexts,
    NonPrimeCharacteristic,
    NotASubfield,
    ReducibleModulus,
)

TABLE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation; fine for the sizes used here."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, a) with q = p**a, or None if q is not a prime power."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    (p, a), = fac.items()
    return p, a


# ---------------------------------------------------------------------------
# dense polynomials over a field, coefficient lists of element ints, constant first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(F: FiniteField, a, b) -> list[int]:
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def poly_sub(F: FiniteField, a, b) -> list[int]:
    n = max(len(a), len(b))
    out = [F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def poly_mul(F: FiniteField, a, b) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def poly_divmod(F: FiniteField, a, b) -> tuple[list[int], list[int]]:
    b = _trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = _trim(list(a))
    if len(r) < len(b):
        return [], r
    lead_inv = F.inv(b[-1])
    quo = [0] * (len(r) - len(b) + 1)
    sub, mul = F.sub, F.mul
    for k in range(len(r) - len(b), -1, -1):
        c = r[k + len(b) - 1]
        if c == 0:
            continue
        c = mul(c, lead_inv)
        quo[k] = c
        for i, bi in enumerate(b):
            if bi:
                r[k + i] = sub(r[k + i], mul(c, bi))
    return _trim(quo), _trim(r[: len(b) - 1])


def poly_mod(F: FiniteField, a, b) -> list[int]:
    return poly_divmod(F, a, b)[1]


def poly_monic(F: FiniteField, a) -> list[int]:
    a = _trim(list(a))
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def poly_gcd(F: FiniteField, a, b) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_powmod(F: FiniteField, a, e: int, m) -> list[int]:
    result = [1]
    base = poly_mod(F, a, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        e >>= 1
        if e:
            base = poly_mod(F, poly_mul(F, base, base), m)
    return result


def poly_eval(F: FiniteField, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_irreducible(F: FiniteField, f) -> bool:
    """Rabin's test: exact, using x^(Q^i) mod f and gcds over F = GF(Q)."""
    f = poly_monic(F, f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    frob = [x]
    cur = x
    for _ in range(n):
        cur = poly_powmod(F, cur, F.q, f)
        frob.append(cur)
    if poly_sub(F, frob[n], x):
        return False
    for r in factorize(n):
        g = poly_gcd(F, f, poly_sub(F, frob[n // r], x))
        if len(g) > 1:
            return False
    return True


def poly_roots(F: FiniteField, f, seed: int = 0) -> list[int]:
    """Distinct roots of f in F, sorted by int encoding."""
    f = poly_monic(F, f)
    if len(f) <= 1:
        return []
    if f[0] == 0:
        rest = list(f)
        while rest and rest[0] == 0:
            rest.pop(0)
        return sorted(set([0] + poly_roots(F, rest, seed)))
    xq = poly_powmod(F, [0, 1], F.q, f)
    g = poly_gcd(F, f, poly_sub(F, xq, [0, 1]))
    rng = random.Random(seed)
    return sorted(_split_linear(F, g, rng))


def _split_linear(F: FiniteField, g, rng: random.Random) -> list[int]:
    deg = len(g) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [F.neg(g[0])]
    while True:
        delta = rng.randrange(F.q)
        if F.p == 2:
            t = [0, delta] if delta else []
            acc = list(t)
            for _ in range(F.abs_degree - 1):
                t = poly_mod(F, poly_mul(F, t, t), g)
                acc = poly_add(F, acc, t)
            h = acc
        else:
            h = poly_sub(F, poly_powmod(F, [delta, 1], (F.q - 1) // 2, g), [1])
        c = poly_gcd(F, g, h)
        if 1 < len(c) < len(g):
            other, rem = poly_divmod(F, g, c)
            assert not rem
            return _split_linear(F, c, rng) + _split_linear(F, poly_monic(F, other), rng)


# ---------------------------------------------------------------------------


_REGISTRY: dict[tuple, FiniteField] = {}


class FiniteField:
    """GF(p) (``base is None``) or ``base[w]/(modulus)``.

    Use :func:`make_field` / :func:`extend_field`; they return canonical,
    shared instances so that identity comparison of contexts is meaningful.
    """

    def __init__(self, p: int, base: FiniteField | None, modulus):
        self.p = p
        self.base = base
        self.modulus = tuple(int(c) for c in modulus)
        self.degree = len(self.modulus) - 1
        self.q = p if base is None else base.q ** self.degree
        self.abs_degree = 1 if base is None else base.abs_degree * self.degree
        self.key = (p, None if base is None else base.key, self.modulus)
        self._ext: dict[int, FiniteField] = {}
        if base is None:
            self._kind = "prime"
            self._bind_prime()
        elif self.q <= TABLE_LIMIT:
            self._kind = "table"
            self._bind_table()
        else:
            self._kind = "poly"
            self._bind_poly()

    # -- construction of the int-level kernels ------------------------------

    def _bind_prime(self):
        p = self.p
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.neg = lambda a: (-a) % p
        self.mul = lambda a, b: (a * b) % p

    def _bind_poly(self):
        B = self.base
        d = self.degree
        bq = B.q
        if self.p == 2:
            self.add = self.sub = operator.xor
            self.neg = lambda a: a
        else:
            def add(a, b):
                out, scale = 0, 1
                for _ in range(d):
                    a, ra = divmod(a, bq)
                    b, rb = divmod(b, bq)
                    out += B.add(ra, rb) * scale
                    scale *= bq
                return out

            def neg(a):
                out, scale = 0, 1
                for _ in range(d):
                    a, ra = divmod(a, bq)
                    out += B.neg(ra) * scale
                    scale *= bq
                return out

            self.add = add
            self.neg = neg
            self.sub = lambda a, b: add(a, neg(b))
        self.mul = self._mul_poly

    def _bind_table(self):
        self._bind_poly()
        q = self.q
        g = self._find_primitive()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_poly(v, g)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log, self.primitive = exp, log, g

        def mul(a, b):
            if a == 0 or b == 0:
                return 0
            return exp[log[a] + log[b]]

        self.mul = mul
        if self.p != 2:
            p = self.p
            zech = [-1] * (q - 1)
            for n in range(q - 1):
                v = exp[n]
                c0 = v % p
                w = v - c0 + (c0 + 1) % p
                zech[n] = log[w] if w else -1
            self._zech = zech
            qm1 = q - 1

            def add(a, b):
                if a == 0:
                    return b
                if b == 0:
                    return a
                la = log[a]
                z = zech[(log[b] - la) % qm1]
                if z < 0:
                    return 0
                return exp[la + z]

            neg_one_log = qm1 // 2

            def neg(a):
                if a == 0:
                    return 0
                return exp[log[a] + neg_one_log]

            self.add = add
            self.neg = neg
            self.sub = lambda a, b: add(a, neg(b))

    def _find_primitive(self) -> int:
        n = self.q - 1
        primes = list(factorize(n))
        for g in range(2, self.q):
            if all(self._pow_generic(g, n // r) != 1 for r in primes):
                return g
        if self.q == 2:
            return 1
        raise RuntimeError("no primitive element found")  # unreachable for a field

    def _pow_generic(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            e >>= 1
            if e:
                a = self._mul_poly(a, a)
        return result

    def _mul_poly(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        B = self.base
        d = self.degree
        ca = self.decode(a)
        cb = self.decode(b)
        badd, bmul, bsub = B.add, B.mul, B.sub
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                if y:
                    prod[i + j] = badd(prod[i + j], bmul(x, y))
        m = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d):
                    if m[i]:
                        prod[k - d + i] = bsub(prod[k - d + i], bmul(c, m[i]))
        return self.encode(prod[:d])

    # -- int-level API -----------------------------------------------------

    def decode(self, v: int) -> list[int]:
        """Coefficient vector over the base (ints of the base), constant first."""
        if self.base is None:
            return [v]
        bq = self.base.q
        out = []
        for _ in range(self.degree):
            v, r = divmod(v, bq)
            out.append(r)
        return out

    def encode(self, coeffs) -> int:
        if self.base is None:
            return int(coeffs[0]) % self.p
        bq = self.base.q
        v = 0
        for c in reversed(list(coeffs)[: self.degree]):
            v = v * bq + int(c)
        return v

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._kind == "prime":
            return pow(a, self.p - 2, self.p)
        if self._kind == "table":
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        # extended Euclid over the base, modulo the defining polynomial
        B = self.base
        r0, r1 = list(self.modulus), _trim(self.decode(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo, rem = poly_divmod(B, r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, poly_sub(B, s0, poly_mul(B, quo, s1))
        c = B.inv(r1[0])
        s1 = [B.mul(c, x) for x in s1]
        return self.encode(s1 + [0] * (self.degree - len(s1)))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 0 if e else 1
        if self._kind == "prime":
            return pow(a, e % (self.p - 1), self.p)
        if self._kind == "table":
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        e %= self.q - 1
        result = 1
        mul = self.mul
        while e:
            if e & 1:
                result = mul(result, a)
            e >>= 1
            if e:
                a = mul(a, a)
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer n (through the prime field)."""
        return n % self.p

    def contains(self, sub: FiniteField) -> bool:
        F = self
        while F is not None:
            if F is sub:
                return True
            F = F.base
        return sub.base is None and sub.p == self.p

    # -- squares, traces, square roots ---------------------------------------

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        if self._kind == "table":
            return self._log[a] % 2 == 0
        return self.pow(a, (self.q - 1) // 2) == 1

    @cached_property
    def _nonresidue(self) -> int:
        for z in range(2, self.q):
            if not self.is_square(z):
                return z
        raise RuntimeError("no quadratic non-residue")  # unreachable for odd q

    def sqrt(self, a: int) -> int | None:
        """A square root of a, or None when a is a non-square."""
        if a == 0:
            return 0
        q = self.q
        if self.p == 2:
            return self.pow(a, q // 2)
        if not self.is_square(a):
            return None
        if self._kind == "table":
            return self._exp[self._log[a] // 2]
        if q % 4 == 3:
            return self.pow(a, (q + 1) // 4)
        # Tonelli-Shanks
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = self.pow(self._nonresidue, t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        m = s
        while b != 1:
            i, bb = 0, b
            while bb != 1:
                bb = self.mul(bb, bb)
                i += 1
            c = z
            for _ in range(m - i - 1):
                c = self.mul(c, c)
            x = self.mul(x, c)
            z = self.mul(c, c)
            b = self.mul(b, z)
            m = i
        return x

    @cached_property
    def _trace_mask(self) -> int:
        # absolute trace is GF(2)-linear and the int bits are GF(2) coordinates
        mask = 0
        for i in range(self.abs_degree):
            mask |= self._trace_slow(1 << i) << i
        return mask

    def _trace_slow(self, c: int) -> int:
        acc, t = 0, c
        for _ in range(self.abs_degree):
            acc ^= t
            t = self.mul(t, t)
        assert acc in (0, 1)
        return acc

    def trace2(self, c: int) -> int:
        """Absolute trace to GF(2) (characteristic 2 only)."""
        return bin(c & self._trace_mask).count("1") & 1

    @cached_property
    def _artin_schreier_basis(self) -> dict[int, tuple[int, int]]:
        basis: dict[int, tuple[int, int]] = {}
        for i in range(self.abs_degree):
            e = 1 << i
            vec, combo = self.mul(e, e) ^ e, e
            while vec:
                top = vec.bit_length() - 1
                if top not in basis:
                    basis[top] = (vec, combo)
                    break
                bv, bc = basis[top]
                vec ^= bv
                combo ^= bc
        return basis

    def solve_artin_schreier(self, c: int) -> int | None:
        """One root z of z^2 + z = c, or None (characteristic 2 only)."""
        if self.trace2(c):
            return None
        m = self.abs_degree
        if m % 2 == 1:
            z, t = 0, c
            for i in range(m):
                if i % 2 == 0:
                    z ^= t
                t = self.mul(t, t)
            return z
        basis = self._artin_schreier_basis
        z = 0
        while c:
            top = c.bit_length() - 1
            if top not in basis:
                return None
            bv, bc = basis[top]
            c ^= bv
            z ^= bc
        return z

    def solve_quadratic_int(self, A: int, B: int, C: int) -> list[int]:
        """Roots of A*y^2 + B*y + C in this field, sorted, without repetition."""
        if A == 0 and B == 0:
            raise DegenerateEquation("A = B = 0")
        if A == 0:
            return [self.div(self.neg(C), B)]
        if self.p == 2:
            if B == 0:
                return [self.sqrt(self.div(C, A))]
            c = self.div(self.mul(A, C), self.mul(B, B))
            z = self.solve_artin_schreier(c)
            if z is None:
                return []
            scale = self.div(B, A)
            return sorted({self.mul(scale, z), self.mul(scale, z ^ 1)})
        disc = self.sub(self.mul(B, B), self.mul(self.from_int(4), self.mul(A, C)))
        s = self.sqrt(disc)
        if s is None:
            return []
        inv2a = self.inv(self.mul(self.from_int(2), A))
        mb = self.neg(B)
        return sorted({self.mul(self.add(mb, s), inv2a), self.mul(self.sub(mb, s), inv2a)})

    # -- element-level API ---------------------------------------------------

    def __call__(self, v) -> FieldElem:
        if isinstance(v, FieldElem):
            if v.field is self:
                return v
            if self.contains(v.field):
                return FieldElem(self, v.v)
            raise MixedContexts(f"cannot view an element of {v.field} in {self}")
        v = int(v)
        if not 0 <= v < self.q:
            raise ValueError(f"{v} is not an element encoding of {self}")
        return FieldElem(self, v)

    def from_coeffs(self, coeffs) -> FieldElem:
        """Element from its coefficient vector over the base (constant first).

        Coefficients may be ints (encodings in the base), FieldElems of the
        base, or nested lists for a tower.
        """
        if self.base is None:
            (c,) = list(coeffs) or [0]
            return FieldElem(self, int(c) % self.p)
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            raise ValueError("too many coefficients")
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElem):
                vals.append(self.base(c).v)
            elif isinstance(c, (list, tuple)):
                vals.append(self.base.from_coeffs(c).v)
            else:
                vals.append(self.base(int(c) % self.base.q if self.base.base is None else int(c)).v)
        vals += [0] * (self.degree - len(vals))
        return FieldElem(self, self.encode(vals))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @property
    def gen(self) -> FieldElem:
        """The adjoined root w of the modulus (or 1 for a prime field)."""
        return FieldElem(self, 1 if self.base is None else self.base.q)

    def elements(self):
        return (FieldElem(self, v) for v in range(self.q))

    def random_element(self, rng: random.Random, nonzero: bool = False) -> FieldElem:
        lo = 1 if nonzero else 0
        return FieldElem(self, rng.randrange(lo, self.q))

    def embed(self, e: FieldElem) -> FieldElem:
        """Image of an element of a subfield of the tower."""
        return self(e)

    def frobenius(self, e: FieldElem, relative_to: FiniteField | None = None) -> FieldElem:
        """e -> e**|relative_to|; the prime field when relative_to is None."""
        if relative_to is None:
            Q = self.p
        else:
            if not self.contains(relative_to):
                raise NotASubfield(f"{relative_to} is not a subfield of {self}")
            Q = relative_to.q
        e = self(e)
        return FieldElem(self, self.pow(e.v, Q))

    def extension(self, d: int) -> FiniteField:
        return extend_field(self, d)

    # -- serialisation -------------------------------------------------------

    def element_to_json(self, v: int):
        if self.base is None:
            return [v]
        if self.base.base is None:
            return self.decode(v)
        return [self.base.element_to_json(c) for c in self.decode(v)]

    def element_from_json(self, data) -> FieldElem:
        if self.base is None:
            (c,) = data
            return self(int(c) % self.p)
        if self.base.base is None:
            return self.from_coeffs([int(c) for c in data])
        return self.from_coeffs([list(c) for c in data])

    def to_json(self) -> dict:
        if self.base is None or self.base.base is None:
            return {"p": self.p, "a": self.abs_degree, "modulus": list(self.modulus)}
        return {
            "base": self.base.to_json(),
            "degree": self.degree,
            "modulus": [self.base.element_to_json(c) for c in self.modulus],
        }

    @staticmethod
    def from_json(data: dict) -> FiniteField:
        if "base" in data:
            base = FiniteField.from_json(data["base"])
            ext = extend_field(base, int(data["degree"]))
            want = tuple(base.element_from_json(c).v for c in data["modulus"])
            if want != ext.modulus:
                ext = _tower(base, want)
            return ext
        a = int(data["a"])
        modulus = data.get("modulus")
        return make_field(int(data["p"]), a, modulus if a > 1 else None)

    # -- vectorised kernels (table and prime fields only) ----------------------

    @cached_property
    def _np(self) -> dict[str, np.ndarray]:
        if self._kind == "poly":
            raise ValueError(f"{self} is too large for vectorised arithmetic")
        if self._kind == "prime":
            return {}
        qm1 = self.q - 1
        tabs = {
            "exp": np.array(self._exp + self._exp[:2], dtype=np.int64),
            "log": np.array(self._log, dtype=np.int64),
        }
        if self.p != 2:
            tabs["zech"] = np.array(self._zech, dtype=np.int64)
            tabs["neg"] = np.array([self.neg(v) for v in range(self.q)], dtype=np.int64)
        tabs["inv"] = np.array([0] + [self._exp[(qm1 - self._log[v]) % qm1] for v in range(1, self.q)],
                               dtype=np.int64)
        return tabs

    def vadd(self, a, b):
        if self._kind == "prime":
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        t = self._np
        a = np.asarray(a)
        b = np.asarray(b)
        la = t["log"][a]
        n = (t["log"][b] - la) % (self.q - 1)
        z = t["zech"][n]
        out = t["exp"][la + np.where(z < 0, 0, z)]
        out = np.where(z < 0, 0, out)
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vneg(self, a):
        if self._kind == "prime":
            return (-np.asarray(a)) % self.p
        if self.p == 2:
            return np.asarray(a)
        return self._np["neg"][a]

    def vsub(self, a, b):
        if self._kind == "prime":
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self._kind == "prime":
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        t = self._np
        a = np.asarray(a)
        b = np.asarray(b)
        out = t["exp"][t["log"][a] + t["log"][b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        if self._kind == "prime":
            a = np.asarray(a, dtype=np.int64)
            return np.array([pow(int(v), self.p - 2, self.p) if v else 0 for v in a.ravel()],
                            dtype=np.int64).reshape(a.shape)
        return self._np["inv"][a]

    # -- dunder ---------------------------------------------------------------

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        if self.base.base is None:
            return f"GF({self.p}^{self.degree})"
        return f"{self.base!r}[w]/deg{self.degree}"

    def __reduce__(self):
        return (FiniteField.from_json, (self.to_json(),))


class FieldElem:
    """An element of a FiniteField; immutable and hashable."""

    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise MixedContexts(f"{self.field!r} vs {other.field!r}")
            return other.v
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.sub(self.v, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.sub(o, self.v))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.div(self.v, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.div(o, self.v))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.v))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.v, e))

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv(self.v))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.v == other.v
        if isinstance(other, int):
            return self.v == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    @property
    def coeffs(self) -> list[int]:
        return self.field.decode(self.v)

    def to_json(self):
        return self.field.element_to_json(self.v)

    def __repr__(self):
        F = self.field
        if F.base is None:
            return str(self.v)
        name = "eta" if F.base.base is None else "w"
        terms = []
        for i, c in enumerate(F.decode(self.v)):
            if c == 0:
                continue
            cs = repr(FieldElem(F.base, c))
            if F.base.base is not None:
                cs = f"({cs})"
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(reversed(terms)) or "0"


# ---------------------------------------------------------------------------
# constructors


def _tower(base: FiniteField | None, modulus, p: int | None = None) -> FiniteField:
    p = base.p if base is not None else p
    key = (p, None if base is None else base.key, tuple(modulus))
    F = _REGISTRY.get(key)
    if F is None:
        F = FiniteField(p, base, modulus)
        _REGISTRY[key] = F
    return F


def prime_field(p: int) -> FiniteField:
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    return _tower(None, (0, 1), p)


def _smallest_irreducible(B: FiniteField, d: int) -> tuple[int, ...]:
    for v in range(1, B.q ** d):
        lower = []
        w = v
        for _ in range(d):
            w, r = divmod(w, B.q)
            lower.append(r)
        if lower[0] == 0:
            continue
        f = lower + [1]
        if is_irreducible(B, f):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def parse_poly(text: str, p: int) -> list[int]:
    """Parse 'x^2+16x+3' or a comma list '3,16,1' (constant first)."""
    text = text.replace(" ", "")
    if "x" not in text:
        return [int(c) % p for c in text.split(",")]
    coeffs: dict[int, int] = {}
    for term in text.replace("-", "+-").split("+"):
        if not term:
            continue
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        if "x" in term:
            c, _, e = term.partition("x")
            c = c.rstrip("*") or "1"
            e = e.lstrip("^").lstrip("*") or "1"
            deg = int(e)
        else:
            c, deg = term, 0
        coeffs[deg] = (coeffs.get(deg, 0) + sign * int(c)) % p
    n = max(coeffs)
    return [coeffs.get(i, 0) for i in range(n + 1)]


def make_field(p: int, a: int = 1, modulus=None) -> FiniteField:
    """GF(p^a), from an explicit monic irreducible modulus or the smallest one.

    ``modulus`` is a coefficient list (constant first) or a string such as
    ``"x^2+16x+3"``.  Without one, the first monic irreducible in the order
    that compares coefficient vectors from the x^(a-1) term downwards is used.
    """
    Fp = prime_field(p)
    if a < 1:
        raise ValueError("extension degree must be positive")
    if a == 1 and modulus is None:
        return Fp
    if modulus is None:
        key = ("smallest", p, a)
        F = _REGISTRY.get(key)
        if F is None:
            F = _tower(Fp, _smallest_irreducible(Fp, a))
            _REGISTRY[key] = F
        return F
    if isinstance(modulus, str):
        modulus = parse_poly(modulus, p)
    modulus = [int(c) % p for c in modulus]
    if len(modulus) != a + 1 or modulus[-1] != 1:
        raise ReducibleModulus(f"modulus must be monic of degree {a}")
    if not is_irreducible(Fp, modulus):
        raise ReducibleModulus(f"{modulus} is reducible over GF({p})")
    if a == 1:
        return Fp
    return _tower(Fp, modulus)


def extend_field(base: FiniteField, d: int) -> FiniteField:
    """GF(|base|^d) built directly over ``base`` with a deterministic modulus."""
    if d < 1:
        raise ValueError("degree must be positive")
    if d == 1:
        return base
    ext = base._ext.get(d)
    if ext is None:
        ext = _tower(base, _smallest_irreducible(base, d))
        base._ext[d] = ext
    return ext


def solve_quadratic(F: FiniteField, A, B, C) -> list[FieldElem]:
    """All roots of A*y^2 + B*y + C = 0 in F."""
    A, B, C = (F(v).v for v in (A, B, C))
    return [FieldElem(F, r) for r in F.solve_quadratic_int(A, B, C)]


def field_arith(F: FiniteField, op: str, *operands):
    """Dispatch form of the field operations; mostly for the CLI and tests."""
    xs = [F(v) for v in operands[:2]] if op != "pow" else [F(operands[0])]
    if op == "add":
        return xs[0] + xs[1]
    if op == "sub":
        return xs[0] - xs[1]
    if op == "mul":
        return xs[0] * xs[1]
    if op == "inv":
        return xs[0].inverse()
    if op == "pow":
        return xs[0] ** int(operands[1])
    raise ValueError(f"unknown operation {op!r}")
