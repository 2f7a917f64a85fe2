"""Canonical finite abelian groups.

A finite abelian group is stored by its invariant factors: the unique chain
s_1 | s_2 | ... | s_r with every s_i >= 2 (the empty chain is the trivial
group).  Two groups are isomorphic exactly when these tuples are equal, so
equality of values is isomorphism.

Canonicalization never factors integers.  Merging a cyclic factor Z_m into an
existing chain uses only gcd/lcm steps (Z_a + Z_b = Z_gcd(a,b) + Z_lcm(a,b)),
which per prime performs one insertion-sort pass on the exponents and
therefore lands on the invariant-factor chain of the direct sum.  This
matters because invariant factors arriving from Smith forms of large
Laplacians are hundred-bit composites that we have no business factoring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import factorize, is_prime, nu


def _merge_cyclic(chain: list[int], m: int) -> list[int]:
    """Merge one cyclic order m >= 2 into an ascending divisor chain."""
    out: list[int] = []
    carry = m
    for s in chain:
        g = math.gcd(s, carry)
        lcm = s // g * carry
        if g > 1:
            out.append(g)
        carry = lcm
    if carry > 1:
        out.append(carry)
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """A finite abelian group in invariant-factor form.

    ``invariant_factors`` is an ascending divisor chain with every entry
    >= 2; construct values through :func:`from_cyclic_orders` (or
    :func:`direct_sum`) unless the input is already such a chain.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        fs = self.invariant_factors
        for s in fs:
            if s < 2:
                raise ValueError(f"invariant factor {s} < 2 (drop 1s first)")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValueError(f"not a divisor chain: {a} does not divide {b}")

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def rank(self) -> int:
        """Minimal number of cyclic generators."""
        return len(self.invariant_factors)

    def sylow(self, p: int) -> "AbelianGroup":
        """The p-primary part, extracted without factoring anything."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        parts = []
        for s in self.invariant_factors:
            e = nu(s, p)
            if e:
                parts.append(p**e)
        return AbelianGroup(tuple(parts))

    def primary_decomposition(self) -> dict[int, tuple[int, ...]]:
        """Map prime -> ascending exponents of its cyclic p-power factors.

        This one does factor the invariant factors; call it for display and
        small groups, not inside sweeps over large Laplacian groups.
        """
        out: dict[int, list[int]] = {}
        for s in self.invariant_factors:
            for p, e in factorize(s).items():
                out.setdefault(p, []).append(e)
        return {p: tuple(sorted(es)) for p, es in sorted(out.items())}

    def to_json_dict(self) -> dict:
        return {
            "invariant_factors": [str(s) for s in self.invariant_factors],
            "order": str(self.order),
        }

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z_{s}" for s in self.invariant_factors)


TRIVIAL_GROUP = AbelianGroup()


def from_cyclic_orders(orders) -> AbelianGroup:
    """Canonical form of the direct sum of cyclic groups Z_{orders[i]}.

    Orders equal to 1 contribute nothing and are dropped; zero or negative
    orders are rejected.
    """
    chain: list[int] = []
    for m in orders:
        if m < 1:
            raise ValueError(f"cyclic order must be positive, got {m}")
        if m > 1:
            chain = _merge_cyclic(chain, m)
    return AbelianGroup(tuple(chain))


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    """Canonical form of the direct sum of the given groups."""
    chain: list[int] = []
    for g in groups:
        for m in g.invariant_factors:
            chain = _merge_cyclic(chain, m)
    return AbelianGroup(tuple(chain))


def is_isomorphic(a: AbelianGroup, b: AbelianGroup) -> bool:
    """Isomorphism test; the representation is canonical, so this is =="""
    return a.invariant_factors == b.invariant_factors


def order(a: AbelianGroup) -> int:
    return a.order


def structure_from_torsion_counts(p: int, counts) -> AbelianGroup:
    """Reconstruct an abelian p-group from its torsion counts.

    ``counts[i]`` must equal #{g : g^(p^i) = 1}.  Writing the group as
    a sum of cyclic p-power factors, the ratio counts[i]/counts[i-1] equals
    p^(number of factors of depth >= i), so successive ratios determine the
    multiset of depths.  The counts must start at 1 and stabilize (the last
    two entries equal), otherwise the deep factors would be unknowable.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    counts = [int(c) for c in counts]
    if not counts:
        raise ValueError("torsion counts are empty")
    if counts[0] != 1:
        raise ValueError(f"torsion counts must start at N_0 = 1, got {counts[0]}")
    if len(counts) >= 2 and counts[-1] != counts[-2]:
        raise ValueError(
            f"torsion counts did not stabilize: last entries {counts[-2]} != {counts[-1]}"
        )
    # c[i] = number of cyclic factors of depth >= i, from ratio valuations.
    depth_counts: list[int] = []
    for i in range(1, len(counts)):
        lo, hi = counts[i - 1], counts[i]
        if hi % lo != 0:
            raise ValueError(f"count {hi} is not a multiple of predecessor {lo}")
        ratio = hi // lo
        c = 0
        while ratio % p == 0:
            ratio //= p
            c += 1
        if ratio != 1:
            raise ValueError(f"count ratio {hi}//{lo} is not a power of {p}")
        depth_counts.append(c)
    for a, b in zip(depth_counts, depth_counts[1:]):
        if b > a:
            raise ValueError(
                f"inconsistent torsion counts: {b} factors of depth i+1 "
                f"but only {a} of depth i"
            )
    orders: list[int] = []
    for i, c in enumerate(depth_counts, start=1):
        deeper = depth_counts[i] if i < len(depth_counts) else 0
        orders.extend([p**i] * (c - deeper))
    return from_cyclic_orders(orders)


def torsion_counts(g: AbelianGroup, p: int, max_i: int) -> list[int]:
    """#{h in g : h^(p^i) = 1} for i = 0..max_i (inverse of the above)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    out = []
    for i in range(max_i + 1):
        total = 1
        for s in g.invariant_factors:
            total *= math.gcd(s, p**i)
        out.append(total)
    return out
