"""Unit groups of circulant matrices over finite fields.

An invertible n x n circulant over F_q (q = p^r) is the same thing as a
unit of R = F_q[x]/(x^n - 1); C(n, q) denotes the full unit group and
C'(n, q) the subgroup of units with value 1 at x = 1 (circulants fixing the
all-ones vector).  This module provides:

* explicit small finite fields and ring elements, with unit tests via
  polynomial gcd;
* closed forms: for gcd(n, q) = 1 the group C'(n, q) matches the sand dune
  group Sigma(n, q) and C'(n, q)/<x> the sandpile group S(n, q); for prime
  q a p-power Sylow tower handles gcd(n, p) > 1;
* torsion-count oracles: in characteristic p the p-th power map is a ring
  endomorphism, so the count #{u : u^(p^i) = 1} has a closed form and
  reconstructs the Sylow p-subgroup without enumeration;
* a vectorized brute-force enumerator (numpy) that computes any of these
  groups by counting torsion directly, for q^n up to a configurable cap.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import abelian
from .abelian import AbelianGroup, structure_from_torsion_counts
from .arith import is_prime, multiplicative_order, nu, prime_factors, prime_power
from .closed_form import cyclotomic_cosets, sand_dune_group, sandpile_group

DEFAULT_ENUMERATION_CAP = 1 << 22
_CHUNK_ROWS = 1 << 16


# ---------------------------------------------------------------------------
# Finite fields F_{p^r} and the ring F_q[x]/(x^n - 1)
# ---------------------------------------------------------------------------


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic-leading b over F_p (coefficients ascending)."""
    a = a[:]
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        _poly_trim(a)
    return a


def _is_irreducible(poly: list[int], p: int) -> bool:
    deg = len(poly) - 1
    if deg == 1:
        return True
    for low_deg in range(1, deg // 2 + 1):
        for idx in range(p**low_deg):
            div = _digits_of(idx, p, low_deg) + [1]
            if not _poly_mod(poly, div, p):
                return False
    return True


def _digits_of(value: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(value % base)
        value //= base
    return out


class FiniteField:
    """The field F_{p^r}, elements encoded as integers 0..p^r - 1.

    The integer encoding is positional base p: the element sum(c_t y^t) is
    the integer sum(c_t p^t), where y is a root of the modulus.  The modulus
    is the least monic irreducible of degree r in this encoding.
    """

    def __init__(self, p: int, r: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError(f"extension degree must be >= 1, got {r}")
        self.p = p
        self.r = r
        self.q = p**r
        for idx in range(self.q):
            poly = _digits_of(idx, p, r) + [1]
            if _is_irreducible(poly, p):
                self.modulus = tuple(poly)
                break
        self._mul_cache: dict[tuple[int, int], int] = {}

    def _to_digits(self, a: int) -> list[int]:
        return _digits_of(a, self.p, self.r)

    def _from_digits(self, digits) -> int:
        total = 0
        for t in reversed(range(self.r)):
            total = total * self.p + digits[t]
        return total

    def add(self, a: int, b: int) -> int:
        da, db = self._to_digits(a), self._to_digits(b)
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._from_digits([(-x) % self.p for x in self._to_digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        p, r = self.p, self.r
        da, db = self._to_digits(a), self._to_digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, list(self.modulus), p)
        rem += [0] * (r - len(rem))
        result = self._from_digits(rem)
        if len(self._mul_cache) < 1 << 18:
            self._mul_cache[key] = result
        return result

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, r={self.r})"


@lru_cache(maxsize=None)
def field_for(q: int) -> FiniteField:
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return FiniteField(*pp)


@dataclass(frozen=True)
class RingElement:
    """Element c_0 + c_1 x + ... + c_{n-1} x^{n-1} of F_q[x]/(x^n - 1)."""

    field: FiniteField
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need n >= 1")
        if len(self.coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients")
        if any(not 0 <= c < self.field.q for c in self.coeffs):
            raise ValueError("coefficients must be field elements 0..q-1")

    @classmethod
    def one(cls, field: FiniteField, n: int) -> "RingElement":
        return cls(field, n, (1,) + (0,) * (n - 1))

    @classmethod
    def x_power(cls, field: FiniteField, n: int, t: int = 1) -> "RingElement":
        coeffs = [0] * n
        coeffs[t % n] = 1
        return cls(field, n, tuple(coeffs))

    def __mul__(self, other: "RingElement") -> "RingElement":
        if self.field is not other.field or self.n != other.n:
            raise ValueError("mixing elements of different rings")
        f, n = self.field, self.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        k = (i + j) % n
                        out[k] = f.add(out[k], f.mul(a, b))
        return RingElement(f, n, tuple(out))

    def __pow__(self, e: int) -> "RingElement":
        if e < 0:
            raise ValueError("negative ring powers are not defined here")
        result = RingElement.one(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def eval_at_one(self) -> int:
        total = 0
        for c in self.coeffs:
            total = self.field.add(total, c)
        return total


def _ring_poly_gcd_is_one(c: RingElement) -> bool:
    """gcd(c(x), x^n - 1) = 1 over F_q, by the Euclidean algorithm."""
    f = c.field
    a = [0] * c.n + [1]
    a[0] = f.neg(1)  # x^n - 1
    b = _poly_trim(list(c.coeffs))
    while b:
        a, b = b, _poly_mod_field(a, b, f)
    return len(a) == 1  # nonzero constant


def _poly_mod_field(a: list[int], b: list[int], f: FiniteField) -> list[int]:
    a = a[:]
    inv_lead = f.inv(b[-1])
    while len(a) >= len(b) and a:
        coef = f.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = f.sub(a[shift + i], f.mul(coef, bc))
        _poly_trim(a)
    return a


def is_unit(c: RingElement) -> bool:
    """Whether c is invertible in F_q[x]/(x^n - 1)."""
    if all(x == 0 for x in c.coeffs):
        return False
    return _ring_poly_gcd_is_one(c)


def is_restricted_unit(c: RingElement) -> bool:
    """Whether c is a unit with c(1) = 1 (membership in C'(n, q))."""
    return c.eval_at_one() == 1 and is_unit(c)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _require_prime_power(q: int) -> tuple[int, int]:
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return pp


def circulant_group_coprime(m: int, q: int) -> AbelianGroup:
    """C'(m, q) for gcd(m, q) = 1: one summand Z_{q^o(v) - 1} per coset.

    This is literally the sand dune group Sigma(m, q) and shares its
    construction.
    """
    _require_prime_power(q)
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if math.gcd(m, q) != 1:
        raise ValueError(f"need gcd(m, q) = 1, got gcd({m}, {q}) != 1")
    return sand_dune_group(m, q)


def circulant_quotient_coprime(m: int, q: int) -> AbelianGroup:
    """C'(m, q)/<x> for gcd(m, q) = 1: equals the sandpile group S(m, q)."""
    _require_prime_power(q)
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if math.gcd(m, q) != 1:
        raise ValueError(f"need gcd(m, q) = 1, got gcd({m}, {q}) != 1")
    return sandpile_group(m, q)


def relation_exponents(m: int, q: int) -> dict[int, int]:
    """The exponents r_v = (q^o(v) - 1) / (m / gcd(m, v)) of the quotient
    presentation of C'(m, q)/<x> (exposed for property tests)."""
    _require_prime_power(q)
    cs = cyclotomic_cosets(m, q)
    out = {}
    for orbit in cs.orbits:
        v = orbit[0]
        full = q ** len(orbit) - 1
        additive_order = m // math.gcd(m, v)
        if full % additive_order != 0:
            raise AssertionError(
                f"{full} not divisible by additive order {additive_order} of {v}"
            )
        out[v] = full // additive_order
    return out


def circulant_star_group_prime(n: int, p: int) -> AbelianGroup:
    """C'(n, p) for prime p and any n = p^k * m: a p-power tower plus the
    coprime part C'(m, p)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    k = nu(n, p) if n % p == 0 else 0
    m = n // p**k
    orders: list[int] = []
    if k >= 1:
        for i in range(k - 1):
            orders.extend([p ** (k - 1 - i)] * (p**i * (p - 1) ** 2 * m))
        orders.extend([p**k] * ((p - 1) * m))
    return abelian.direct_sum(
        abelian.from_cyclic_orders(orders), circulant_group_coprime(m, p)
    )


def circulant_quotient_prime(n: int, p: int) -> AbelianGroup:
    """C'(n, p)/<x> for prime p and any n: the p-power tower loses one
    Z_{p^k} generator to <x>, the coprime part becomes S(m, p).

    The result is checked against the closed-form sandpile group S(n, p);
    a mismatch means an implementation bug and raises.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    k = nu(n, p) if n % p == 0 else 0
    m = n // p**k
    orders: list[int] = []
    if k >= 1:
        for i in range(k - 1):
            orders.extend([p ** (k - 1 - i)] * (p**i * (p - 1) ** 2 * m))
        orders.extend([p**k] * ((p - 1) * m - 1))
    result = abelian.direct_sum(
        abelian.from_cyclic_orders(orders), circulant_quotient_coprime(m, p)
    )
    expected = sandpile_group(n, p)
    if result != expected:
        raise AssertionError(
            f"quotient tower for (n, p) = ({n}, {p}) gave {result}, "
            f"but the sandpile group is {expected}"
        )
    return result


# ---------------------------------------------------------------------------
# Torsion-count oracles (no enumeration)
# ---------------------------------------------------------------------------


def p_torsion_counts(n: int, q: int, max_i: int | None = None) -> list[int]:
    """N_i = #{u in C'(n, q) : u^(p^i) = 1} for i = 0..max_i, in closed form.

    With n = p^k * m (gcd(m, p) = 1), u^(p^i) = 1 iff (u - 1)^(p^i) = 0 iff
    (x^m - 1)^(p^(k-i)) divides u - 1, giving N_i = q^(n - m * p^(max(0,k-i))).
    """
    p, _ = _require_prime_power(q)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    k = nu(n, p) if n % p == 0 else 0
    m = n // p**k
    if max_i is None:
        max_i = k + 1
    return [q ** (n - m * p ** max(0, k - i)) for i in range(max_i + 1)]


def quotient_p_torsion_counts(n: int, q: int, max_i: int | None = None) -> list[int]:
    """Torsion counts of C'(n, q)/<x> at the characteristic, for n = p^k.

    Counting cosets amounts to counting #{u : u^(p^i) in <x>} and dividing
    by n.  The image of the p^i-power endomorphism meets <x> exactly in the
    powers x^(j p^i), so the tally is N_i * p^(k-i) for i <= k.
    """
    p, _ = _require_prime_power(q)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    k = nu(n, p) if n % p == 0 else 0
    if p**k != n:
        raise ValueError(
            f"quotient torsion counts need n to be a power of char {p}; "
            f"got n = {n} (use the brute-force enumerator instead)"
        )
    if max_i is None:
        max_i = k + 1
    counts = []
    for i in range(max_i + 1):
        pw = p ** max(k - i, 0)
        tally = pw * q ** (n - pw)
        if tally % n != 0:
            raise AssertionError(f"tally {tally} not divisible by n = {n}")
        counts.append(tally // n)
    return counts


def star_group_closed(n: int, q: int) -> tuple[AbelianGroup, str]:
    """C'(n, q) by the best available closed route, with a method tag.

    Coprime and prime-q cases use the fully closed forms; otherwise the
    Sylow p-part comes from torsion-count reconstruction and the rest from
    the coprime formula (valid for every n, q since p never divides
    q^o(v) - 1).
    """
    p, r = _require_prime_power(q)
    if math.gcd(n, q) == 1:
        return circulant_group_coprime(n, q), "closed_form"
    if r == 1:
        return circulant_star_group_prime(n, q), "closed_form"
    k = nu(n, p)
    m = n // p**k
    sylow_p = structure_from_torsion_counts(p, p_torsion_counts(n, q))
    return abelian.direct_sum(sylow_p, circulant_group_coprime(m, q)), "torsion_counts"


def quotient_group_closed(n: int, q: int) -> tuple[AbelianGroup, str]:
    """C'(n, q)/<x> by the best available closed route, with a method tag."""
    p, r = _require_prime_power(q)
    if math.gcd(n, q) == 1:
        return circulant_quotient_coprime(n, q), "closed_form"
    if r == 1:
        return circulant_quotient_prime(n, q), "closed_form"
    k = nu(n, p)
    m = n // p**k
    if m == 1:
        counts = quotient_p_torsion_counts(n, q)
        return structure_from_torsion_counts(p, counts), "torsion_counts"
    raise ValueError(
        f"no closed decomposition of C'({n}, {q})/<x> with q = p^{r}, r > 1 "
        f"and a mixed modulus; use the brute-force enumerator"
    )


# ---------------------------------------------------------------------------
# Brute-force enumeration (numpy)
# ---------------------------------------------------------------------------


def enumeration_cap(cap: int | None = None) -> int:
    """Resolve the element cap: explicit argument, else SANDPILE_BRUTE_CAP,
    else the default 2^22."""
    if cap is not None:
        return cap
    env = os.environ.get("SANDPILE_BRUTE_CAP")
    if env:
        return int(env)
    return DEFAULT_ENUMERATION_CAP


class _DigitKernel:
    """Vectorized arithmetic for blocks of F_q[x]/(x^n - 1) elements, odd p.

    Elements are digit arrays: shape (N, n) of base-p digits when q = p,
    else (N, n, r) holding the base-p digits of each coefficient.
    """

    def __init__(self, n: int, q: int):
        self.p, self.r = _require_prime_power(q)
        self.q = q
        self.n = n
        self.digit_dtype = np.uint8 if self.p < 256 else np.int64
        self.field = field_for(q) if self.r > 1 else None
        if self.field is not None:
            # y^s mod modulus for s = 0..2r-2, as base-p digit rows.
            red = []
            for s in range(2 * self.r - 1):
                rem = _poly_mod([0] * s + [1], list(self.field.modulus), self.p)
                rem += [0] * (self.r - len(rem))
                red.append(rem)
            self.y_reduction = np.array(red, dtype=np.int64)
            self.frobenius_lut = np.array(
                [self.field.frobenius(a) for a in range(self.q)], dtype=np.int64
            )
        digit_count = n * self.r
        self.pack_weights = (
            np.array([self.p], dtype=np.int64) ** np.arange(digit_count, dtype=np.int64)
        )
        self.coeff_weights = (
            np.array([self.p], dtype=np.int64) ** np.arange(self.r, dtype=np.int64)
        )

    def build_population(self, total: int) -> np.ndarray:
        blocks = []
        for lo in range(0, total, _CHUNK_ROWS):
            ids = np.arange(lo, min(lo + _CHUNK_ROWS, total), dtype=np.int64)
            digits = (ids[:, None] // self.pack_weights[None, :]) % self.p
            blocks.append(digits.astype(self.digit_dtype))
        digits = np.concatenate(blocks)
        if self.r == 1:
            return digits
        return digits.reshape(-1, self.n, self.r)

    def select(self, block: np.ndarray, rows) -> np.ndarray:
        return block[rows]

    def restricted_mask(self, block: np.ndarray) -> np.ndarray:
        sums = block.astype(np.int64).sum(axis=1) % self.p
        if self.r == 1:
            return sums == 1
        want = np.zeros(self.r, dtype=np.int64)
        want[0] = 1
        return (sums == want).all(axis=1)

    def keys(self, block: np.ndarray) -> np.ndarray:
        out = np.empty(block.shape[0], dtype=np.int64)
        for lo in range(0, block.shape[0], _CHUNK_ROWS):
            hi = min(lo + _CHUNK_ROWS, block.shape[0])
            flat = block[lo:hi].reshape(hi - lo, -1).astype(np.int64)
            out[lo:hi] = flat @ self.pack_weights
        return out

    def x_keys(self) -> np.ndarray:
        return self.pack_weights[np.arange(self.n) * self.r]

    def power(self, block: np.ndarray, e: int) -> np.ndarray:
        """block ** e elementwise in the ring (e >= 1), chunked over rows."""
        out = np.empty_like(block)
        for lo in range(0, block.shape[0], _CHUNK_ROWS):
            hi = min(lo + _CHUNK_ROWS, block.shape[0])
            out[lo:hi] = self._power_chunk(block[lo:hi], e)
        return out

    def _power_chunk(self, block: np.ndarray, e: int) -> np.ndarray:
        if e == self.p:
            return self._frobenius(block)
        multiply = self._conv_prime if self.r == 1 else self._conv_ext
        bits = bin(e)[3:]
        result = block
        for bit in bits:
            result = multiply(result, result)
            if bit == "1":
                result = multiply(result, block)
        return result

    def _conv_prime(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        rows, n = a.shape
        buf = np.zeros((rows, 2 * n - 1), dtype=np.int64)
        b64 = b.astype(np.int64)
        for i in range(n):
            buf[:, i : i + n] += a[:, i, None].astype(np.int64) * b64
        buf[:, : n - 1] += buf[:, n:]
        return (buf[:, :n] % self.p).astype(self.digit_dtype)

    def _conv_ext(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        rows, n, r = a.shape
        buf = np.zeros((rows, 2 * n - 1, 2 * r - 1), dtype=np.int64)
        b64 = b.astype(np.int64)
        for i in range(n):
            for u in range(r):
                coef = a[:, i, u].astype(np.int64)
                buf[:, i : i + n, u : u + r] += coef[:, None, None] * b64
        buf[:, : n - 1, :] += buf[:, n:, :]
        out = buf[:, :n, :r]
        for s in range(r, 2 * r - 1):
            col = buf[:, :n, s]
            for t in range(r):
                c = int(self.y_reduction[s, t])
                if c:
                    out[:, :, t] += c * col
        return (out % self.p).astype(self.digit_dtype)

    def _frobenius(self, block: np.ndarray) -> np.ndarray:
        """block ** p via the characteristic-p shortcut: coefficientwise
        Frobenius plus the monomial substitution x^j -> x^(j p mod n)."""
        n, p = self.n, self.p
        if self.r == 1:
            coeffs = block
        else:
            packed = block.astype(np.int64) @ self.coeff_weights
            mapped = self.frobenius_lut[packed]
            coeffs = (
                (mapped[..., None] // self.coeff_weights[None, None, :]) % p
            ).astype(self.digit_dtype)
        targets = (np.arange(n, dtype=np.int64) * p) % n
        if len(set(targets.tolist())) == n:
            out = np.zeros_like(coeffs)
            out[:, targets] = coeffs
            return out
        acc = np.zeros(coeffs.shape, dtype=np.int64)
        for j in range(n):
            acc[:, targets[j]] += coeffs[:, j]
        return (acc % p).astype(self.digit_dtype)


class _BitKernel:
    """Characteristic-2 kernel: blocks are r bit-planes of packed int64.

    A block has shape (r, N); plane u holds bit j = the y^u component of
    the x^j coefficient, so a whole ring element occupies one bit column
    across the planes.  Multiplication is a cyclic carry-less multiply per
    plane pair followed by y-power reduction; squaring is the Frobenius
    endomorphism, a linear bit shuffle, which makes square-and-multiply
    powering cheap.  Requires n*r <= 62 bits, guaranteed by the cap.
    """

    def __init__(self, n: int, q: int):
        self.p, self.r = _require_prime_power(q)
        if self.p != 2:
            raise ValueError("bit kernel requires characteristic 2")
        self.q = q
        self.n = n
        self.bit_mask = (1 << n) - 1
        if self.r > 1:
            field = field_for(q)
            self.y_reduction = []
            for s in range(2 * self.r - 1):
                rem = _poly_mod([0] * s + [1], list(field.modulus), 2)
                rem += [0] * (self.r - len(rem))
                self.y_reduction.append(rem)
            # Frobenius of y^u as 0/1 rows: (y^u)^2 = y^(2u) mod modulus.
            self.frobenius_rows = [
                _digits_of(field.frobenius(1 << u), 2, self.r) for u in range(self.r)
            ]

    def build_population(self, total: int) -> np.ndarray:
        ids = np.arange(total, dtype=np.int64)
        return np.stack(
            [(ids >> (u * self.n)) & self.bit_mask for u in range(self.r)]
        )

    def select(self, block: np.ndarray, rows) -> np.ndarray:
        return block[:, rows]

    def restricted_mask(self, block: np.ndarray) -> np.ndarray:
        parity = np.bitwise_count(block.astype(np.uint64)) & 1
        mask = parity[0] == 1
        for u in range(1, self.r):
            mask &= parity[u] == 0
        return mask

    def keys(self, block: np.ndarray) -> np.ndarray:
        out = block[0].copy()
        for u in range(1, self.r):
            out |= block[u] << (u * self.n)
        return out

    def x_keys(self) -> np.ndarray:
        return np.int64(1) << np.arange(self.n, dtype=np.int64)

    def _rotate(self, plane: np.ndarray, i: int) -> np.ndarray:
        return ((plane << i) & self.bit_mask) | (plane >> (self.n - i))

    def _clmul_cyclic(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(a)
        for i in range(self.n):
            lane = -((a >> i) & 1)
            out ^= self._rotate(b, i) & lane
        return out

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        r = self.r
        if r == 1:
            return self._clmul_cyclic(a[0], b[0])[None, :]
        conv = [np.zeros_like(a[0]) for _ in range(2 * r - 1)]
        for u in range(r):
            for v in range(r):
                conv[u + v] ^= self._clmul_cyclic(a[u], b[v])
        out = conv[:r]
        for s in range(r, 2 * r - 1):
            for t in range(r):
                if self.y_reduction[s][t]:
                    out[t] ^= conv[s]
        return np.stack(out)

    def frobenius(self, block: np.ndarray) -> np.ndarray:
        """Squaring: coefficientwise field Frobenius, then x^j -> x^(2j mod n)
        with colliding bits combining by xor (characteristic 2)."""
        r, n = self.r, self.n
        if r == 1:
            planes = [block[0]]
        else:
            planes = []
            for t in range(r):
                acc = np.zeros_like(block[0])
                for u in range(r):
                    if self.frobenius_rows[u][t]:
                        acc ^= block[u]
                planes.append(acc)
        moved = []
        for plane in planes:
            out = np.zeros_like(plane)
            for j in range(n):
                out ^= ((plane >> j) & 1) << (2 * j % n)
            moved.append(out)
        return np.stack(moved)

    def power(self, block: np.ndarray, e: int) -> np.ndarray:
        if e == 2:
            return self.frobenius(block)
        bits = bin(e)[3:]
        result = block
        for bit in bits:
            result = self.frobenius(result)
            if bit == "1":
                result = self.multiply(result, block)
        return result


def _make_kernel(n: int, q: int):
    p, _ = _require_prime_power(q)
    return _BitKernel(n, q) if p == 2 else _DigitKernel(n, q)


@dataclass(frozen=True)
class _BruteAnalysis:
    """Per-element torsion levels for one (n, q), serving all group modes.

    level_id[g] is the least i with g^(ell^i) = 1, level_x[g] the least i
    with g^(ell^i) in <x> (-1 when never reached); restricted marks the
    elements with value 1 at x = 1.
    """

    n: int
    restricted: np.ndarray
    levels: dict[int, tuple[np.ndarray, np.ndarray]]


def _compute_levels(kernel, population, xkeys, ell: int) -> tuple[np.ndarray, np.ndarray]:
    total = population.shape[-1] if isinstance(kernel, _BitKernel) else population.shape[0]
    level_id = np.full(total, -1, dtype=np.int16)
    level_x = np.full(total, -1, dtype=np.int16)
    alive = np.arange(total)
    cur = population
    for i in range(64):
        keys = kernel.keys(cur)
        hit_id = keys == 1
        hit_x = np.isin(keys, xkeys)
        new_x = hit_x & (level_x[alive] < 0)
        new_id = hit_id & (level_id[alive] < 0)
        level_x[alive[new_x]] = i
        level_id[alive[new_id]] = i
        if i > 0 and not new_x.any() and not new_id.any():
            return level_id, level_x
        keep = level_id[alive] < 0
        alive = alive[keep]
        if alive.size == 0:
            return level_id, level_x
        cur = kernel.power(kernel.select(cur, keep), ell)
    raise AssertionError(f"torsion levels for prime {ell} did not stabilize in 64 rounds")


@lru_cache(maxsize=2)
def _brute_analysis(n: int, q: int) -> _BruteAnalysis:
    p, _ = _require_prime_power(q)
    total = q**n
    kernel = _make_kernel(n, q)
    population = kernel.build_population(total)
    restricted = kernel.restricted_mask(population)
    xkeys = np.unique(kernel.x_keys())
    k = nu(n, p) if n % p == 0 else 0
    m = n // p**k
    field_order = multiplicative_order(q, m) if m > 1 else 1
    candidates = sorted({p} | set(prime_factors(q**field_order - 1)))
    levels = {
        ell: _compute_levels(kernel, population, xkeys, ell) for ell in candidates
    }
    return _BruteAnalysis(n=n, restricted=restricted, levels=levels)


def _torsion_series(level: np.ndarray, mask: np.ndarray | None, divisor: int) -> list[int]:
    """Cumulative counts #{g : level(g) <= i}, divided by divisor, listed
    through the first repeated value (where the series provably stays)."""
    selected = level if mask is None else level[mask]
    selected = selected[selected >= 0].astype(np.int64)
    if selected.size == 0:
        return [0]
    cumulative = np.cumsum(np.bincount(selected)).tolist()
    counts = []
    for tally in cumulative:
        if tally % divisor != 0:
            raise AssertionError(f"tally {tally} is not a multiple of {divisor}")
        counts.append(int(tally) // divisor)
    counts.append(counts[-1])
    for i in range(1, len(counts)):
        if counts[i] == counts[i - 1]:
            return counts[: i + 1]
    raise AssertionError("torsion series failed to stabilize")


def unit_group_brute(
    n: int,
    q: int,
    restricted: bool = False,
    modulo_x: bool = False,
    cap: int | None = None,
) -> AbelianGroup:
    """Group structure of C(n, q), C'(n, q), or either modulo <x>, computed
    by enumerating ring elements and counting torsion per prime.

    Only elements with g^(ell^i) landing on the identity (or inside <x>)
    are ever tallied, and such elements are automatically units, so no
    explicit unit filter is needed.  For the quotients, the tallies count
    every coset of <x> exactly n times and are divided accordingly.  The
    number of ring elements q^n must not exceed the cap (argument, else the
    SANDPILE_BRUTE_CAP environment variable, else 2^22).
    """
    _require_prime_power(q)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    limit = enumeration_cap(cap)
    total = q**n
    if total > limit:
        raise ValueError(
            f"q^n = {total} ring elements exceeds the enumeration cap {limit}; "
            f"raise it via the cap argument or SANDPILE_BRUTE_CAP"
        )
    if total >= 1 << 62:
        raise ValueError("q^n too large to pack element keys into 64 bits")

    analysis = _brute_analysis(n, q)
    parts = []
    for ell in sorted(analysis.levels):
        level_id, level_x = analysis.levels[ell]
        level = level_x if modulo_x else level_id
        mask = analysis.restricted if restricted else None
        counts = _torsion_series(level, mask, n if modulo_x else 1)
        part = structure_from_torsion_counts(ell, counts)
        if not part.is_trivial:
            parts.append(part)
    return abelian.direct_sum(*parts)
