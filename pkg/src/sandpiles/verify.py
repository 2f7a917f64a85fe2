"""Verification sweeps: every closed form checked against an independent oracle.

Each check_* function sweeps a parameter grid, compares a closed-form group
(or order, or generator set) against a value computed by a structurally
different route — Smith forms of Laplacians, determinants, exhaustive
enumeration, literal order iteration — and raises VerificationFailure with
the offending parameters on the first mismatch.  The return value is the
number of comparisons performed.  run_all bundles the checks at configurable
scale for the command-line front end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import abelian, circulant, closed_form, digraphs
from .abelian import AbelianGroup, structure_from_torsion_counts
from .arith import is_prime, multiplicative_order, nu, prime_power
from .circulant import RingElement, enumeration_cap, field_for, is_restricted_unit
from .exact_linalg import smith_group

Progress = Callable[[str], None] | None


class VerificationFailure(AssertionError):
    """A closed form disagreed with its oracle; the message is the witness."""


def _fail(check: str, params: str, detail: str) -> None:
    raise VerificationFailure(f"{check} failed at {params}: {detail}")


def _signed(d_max: int):
    for d_abs in range(2, d_max + 1):
        yield d_abs
        yield -d_abs


# ---------------------------------------------------------------------------
# Sandpile / sand dune closed forms vs Smith-form oracles
# ---------------------------------------------------------------------------


def check_de_bruijn_main(n_max: int = 60, d_max: int = 8, progress: Progress = None) -> int:
    """S(n, d) vs the Smith form of the reduced de Bruijn Laplacian, and
    Sigma(n, d) vs the Smith form of the sigma relation matrix."""
    checks = 0
    for d in range(2, d_max + 1):
        if progress:
            progress(f"de Bruijn sweep d={d}, n up to {n_max}")
        for n in range(2, n_max + 1):
            oracle = digraphs.sandpile_group_snf(digraphs.de_bruijn(n, d), 0)
            closed = closed_form.sandpile_group(n, d)
            if oracle != closed:
                _fail("de_bruijn sandpile", f"(n, d)=({n}, {d})",
                      f"SNF oracle {oracle} vs closed form {closed}")
            free, torsion = smith_group(closed_form.sigma_relation_matrix(n, d))
            closed_sigma = closed_form.sand_dune_group(n, d)
            if free != 0:
                _fail("sigma matrix rank", f"(n, d)=({n}, {d})",
                      f"free rank {free}, expected 0")
            if torsion != closed_sigma:
                _fail("de_bruijn sand dune", f"(n, d)=({n}, {d})",
                      f"SNF oracle {torsion} vs closed form {closed_sigma}")
            checks += 2
    return checks


def check_kautz_main(n_max: int = 60, d_max: int = 8, progress: Progress = None) -> int:
    """S(n, -d) vs the Smith form of the reduced Kautz Laplacian, and
    Sigma(n, -d) vs the sigma relation matrix with negative d."""
    checks = 0
    for d in range(2, d_max + 1):
        if progress:
            progress(f"Kautz sweep d={d}, n up to {n_max}")
        for n in range(2, n_max + 1):
            oracle = digraphs.sandpile_group_snf(digraphs.kautz(n, d), 0)
            closed = closed_form.sandpile_group(n, -d)
            if oracle != closed:
                _fail("kautz sandpile", f"(n, d)=({n}, {d})",
                      f"SNF oracle {oracle} vs closed form {closed}")
            free, torsion = smith_group(closed_form.sigma_relation_matrix(n, -d))
            closed_sigma = closed_form.sand_dune_group(n, -d)
            if free != 0 or torsion != closed_sigma:
                _fail("kautz sand dune", f"(n, d)=({n}, {d})",
                      f"SNF oracle {torsion} vs closed form {closed_sigma}")
            checks += 2
    return checks


def check_index_identity(n_max: int = 60, d_max: int = 8) -> int:
    """|Sigma(n, d)| = n * |S(n, d)| for both signs of d."""
    checks = 0
    for d in _signed(d_max):
        for n in range(1, n_max + 1):
            sigma = closed_form.sand_dune_group(n, d).order
            sand = closed_form.sandpile_group(n, d).order
            if sigma != n * sand:
                _fail("index identity", f"(n, d)=({n}, {d})",
                      f"|Sigma|={sigma} but n*|S|={n * sand}")
            checks += 1
    return checks


def check_order_recursion(n_max: int = 60, d_max: int = 8) -> int:
    """|Sigma(n, d)| = |d|^(n - n_1) * |Sigma(n_1, d)| with n_1 = n/gcd(n, |d|)."""
    checks = 0
    for d in _signed(d_max):
        for n in range(1, n_max + 1):
            n1 = n // math.gcd(n, abs(d))
            lhs = closed_form.sand_dune_group(n, d).order
            rhs = abs(d) ** (n - n1) * closed_form.sand_dune_group(n1, d).order
            if lhs != rhs:
                _fail("order recursion", f"(n, d)=({n}, {d})",
                      f"|Sigma(n)|={lhs} vs |d|^(n-n1)*|Sigma(n1)|={rhs}")
            checks += 1
    return checks


def check_crt_split(n_max: int = 60, d_max: int = 8) -> int:
    """Sigma(n, d) = sigma-kernel + Sigma(m, d) and S(n, d) = S-kernel + S(m, d),
    where m is the d-free tail of n."""
    checks = 0
    for d in _signed(d_max):
        for n in range(1, n_max + 1):
            m = closed_form.d_sequence(n, d).m
            sigma_kernel, sandpile_kernel = closed_form.kernel_parts(n, d)
            want_sigma = abelian.direct_sum(sigma_kernel, closed_form.sand_dune_group(m, d))
            want_sand = abelian.direct_sum(sandpile_kernel, closed_form.sandpile_group(m, d))
            if closed_form.sand_dune_group(n, d) != want_sigma:
                _fail("crt split (sigma)", f"(n, d)=({n}, {d})",
                      f"direct sum {want_sigma} != Sigma {closed_form.sand_dune_group(n, d)}")
            if closed_form.sandpile_group(n, d) != want_sand:
                _fail("crt split (sandpile)", f"(n, d)=({n}, {d})",
                      f"direct sum {want_sand} != S {closed_form.sandpile_group(n, d)}")
            checks += 2
    return checks


def check_coprime_cosets(m_max: int = 60, d_max: int = 8) -> int:
    """For gcd(m, d) = 1: Sigma(m, d) is exactly one Z_{|d^o(v)-1|} per coset."""
    checks = 0
    for d in _signed(d_max):
        for m in range(1, m_max + 1):
            if math.gcd(m, abs(d)) != 1:
                continue
            cs = closed_form.cyclotomic_cosets(m, d)
            expected = abelian.from_cyclic_orders(
                [abs(d ** len(orbit) - 1) for orbit in cs.orbits]
            )
            got = closed_form.sand_dune_group(m, d)
            if got != expected:
                _fail("coprime cosets", f"(m, d)=({m}, {d})",
                      f"coset product {expected} != Sigma {got}")
            checks += 1
    return checks


def check_tree_counts(n_max: int = 20, d_max: int = 4, progress: Progress = None) -> int:
    """|S(n, d)| equals the spanning-tree count at EVERY root of DB(n, d),
    and |S(n, -d)| at every root of Ktz(n, d) (both are Eulerian)."""
    checks = 0
    for d in range(2, d_max + 1):
        if progress:
            progress(f"tree counts d={d}")
        for n in range(1, n_max + 1):
            for family, graph, order in (
                ("de_bruijn", digraphs.de_bruijn(n, d), closed_form.sandpile_group(n, d).order),
                ("kautz", digraphs.kautz(n, d), closed_form.sandpile_group(n, -d).order),
            ):
                for root in range(n):
                    trees = digraphs.spanning_tree_count(graph, root)
                    if trees != order:
                        _fail("tree count", f"{family} (n, d)=({n}, {d}) root {root}",
                              f"{trees} trees vs group order {order}")
                    checks += 1
    return checks


# ---------------------------------------------------------------------------
# Generators and element orders
# ---------------------------------------------------------------------------


def check_generators(m_max: int = 40, d_max: int = 8, signed: bool = True) -> int:
    """Every reduced generator lies in the sandpile subgroup, its expansion
    order matches the claimed order, and the claimed orders multiply to
    |S(m, d)|."""
    checks = 0
    d_values = list(_signed(d_max)) if signed else list(range(2, d_max + 1))
    for d in d_values:
        for m in range(1, m_max + 1):
            if math.gcd(m, abs(d)) != 1:
                continue
            generators = closed_form.sandpile_generators(m, d)
            order_product = 1
            for v, (element, claimed) in generators.items():
                if not closed_form.membership_in_sandpile(element):
                    _fail("generator membership", f"(m, d, v)=({m}, {d}, {v})",
                          f"element {element.coeffs} fails the weight test")
                got = closed_form.sigma_element_order(element)
                if got != claimed:
                    _fail("generator order", f"(m, d, v)=({m}, {d}, {v})",
                          f"expansion order {got} vs claimed {claimed}")
                order_product *= claimed
                checks += 2
            sandpile_order = closed_form.sandpile_group(m, d).order
            if order_product != sandpile_order:
                _fail("generator completeness", f"(m, d)=({m}, {d})",
                      f"order product {order_product} vs |S|={sandpile_order}")
            checks += 1
    return checks


def check_element_orders(n_max: int = 60, d_max: int = 8) -> int:
    """The order of e_v from exact rational expansion versus the
    |d^f (d^e - 1)| formula; on orbits that fall into 0 the cycle
    contribution vanishes and the true order is |d|^f instead."""
    checks = 0
    for d in _signed(d_max):
        for n in range(2, n_max + 1):
            for v in range(1, n):
                orbit = [v]
                seen = {v}
                while True:
                    w = orbit[-1] * d % n
                    if w in seen:
                        break
                    seen.add(w)
                    orbit.append(w)
                expansion_order = closed_form.element_order_in_sigma(v, n, d)
                if 0 in seen:
                    steps_to_zero = orbit.index(0)
                    expected = abs(d) ** steps_to_zero
                else:
                    expected = closed_form.element_order_formula(v, n, d)
                if expansion_order != expected:
                    _fail("element order", f"(n, d, v)=({n}, {d}, {v})",
                          f"expansion {expansion_order} vs formula {expected}")
                checks += 1
    return checks


def check_order_gap(m_max: int = 60, d_max: int = 8) -> int:
    """nu_p(d^o(M_p) - 1) - nu_p(d^o(p^t M_p) - 1) <= t, for p | m and t up
    to nu_p(m) - 1 (one less in the exceptional 2-adic case)."""
    checks = 0
    for d in _signed(d_max):
        for m in range(2, m_max + 1):
            if math.gcd(m, abs(d)) != 1:
                continue
            cs = closed_form.cyclotomic_cosets(m, d)
            for p, pi_p, big_m in cs.prime_parts:
                e = nu(m, p)
                t_top = e - 1
                if p == 2 and d % 4 == 3:
                    t_top = e - 2
                base = nu(d ** cs.orbit_size(big_m) - 1, p)
                for t in range(1, t_top + 1):
                    v = p**t * big_m % m
                    gap = base - nu(d ** cs.orbit_size(v) - 1, p)
                    if gap > t:
                        _fail("order gap", f"(m, d, p, t)=({m}, {d}, {p}, {t})",
                              f"valuation gap {gap} exceeds {t}")
                    checks += 1
    return checks


# ---------------------------------------------------------------------------
# Circulant unit groups
# ---------------------------------------------------------------------------

PRIME_POWERS_TO_9 = (2, 3, 4, 5, 7, 8, 9)


def check_circulant_coprime(m_max: int = 40, q_max: int = 9) -> int:
    """C'(m, q) = Sigma(m, q) and C'(m, q)/<x> = S(m, q) for gcd(m, q) = 1."""
    checks = 0
    for q in PRIME_POWERS_TO_9:
        if q > q_max:
            continue
        for m in range(1, m_max + 1):
            if math.gcd(m, q) != 1:
                continue
            star = circulant.circulant_group_coprime(m, q)
            if star != closed_form.sand_dune_group(m, q):
                _fail("circulant coprime star", f"(m, q)=({m}, {q})",
                      f"{star} != Sigma {closed_form.sand_dune_group(m, q)}")
            quotient = circulant.circulant_quotient_coprime(m, q)
            if quotient != closed_form.sandpile_group(m, q):
                _fail("circulant coprime quotient", f"(m, q)=({m}, {q})",
                      f"{quotient} != S {closed_form.sandpile_group(m, q)}")
            if star.order != quotient.order * m:
                _fail("circulant coprime index", f"(m, q)=({m}, {q})",
                      f"|C'|={star.order} != m*|C'/<x>|={m * quotient.order}")
            circulant.relation_exponents(m, q)  # integrality asserted inside
            checks += 3
    return checks


def check_circulant_prime(n_max: int = 40, p_max: int = 7) -> int:
    """For prime p: the Sylow tower form of C'(n, p) equals Sigma(n, p), and
    the quotient form equals S(n, p), for every n including gcd(n, p) > 1."""
    checks = 0
    for p in (2, 3, 5, 7):
        if p > p_max:
            continue
        for n in range(1, n_max + 1):
            star = circulant.circulant_star_group_prime(n, p)
            if star != closed_form.sand_dune_group(n, p):
                _fail("circulant prime star", f"(n, p)=({n}, {p})",
                      f"{star} != Sigma {closed_form.sand_dune_group(n, p)}")
            quotient = circulant.circulant_quotient_prime(n, p)
            if quotient != closed_form.sandpile_group(n, p):
                _fail("circulant prime quotient", f"(n, p)=({n}, {p})",
                      f"{quotient} != S {closed_form.sandpile_group(n, p)}")
            checks += 2
    return checks


def check_torsion_oracle(n_max: int = 64, p_max: int = 7) -> int:
    """Sylow-p subgroup reconstructed from closed-form torsion counts equals
    the Sylow-p part of the tower decomposition of C'(n, p)."""
    checks = 0
    for p in (2, 3, 5, 7):
        if p > p_max:
            continue
        for n in range(1, n_max + 1):
            counts = circulant.p_torsion_counts(n, p)
            rebuilt = structure_from_torsion_counts(p, counts)
            expected = circulant.circulant_star_group_prime(n, p).sylow(p)
            if rebuilt != expected:
                _fail("torsion oracle", f"(n, p)=({n}, {p})",
                      f"reconstruction {rebuilt} vs tower Sylow {expected}")
            checks += 1
    return checks


def check_x_subgroup(n_max: int = 16, q_max: int = 9) -> int:
    """<x> really is a cyclic subgroup of order n inside C'(n, q)."""
    checks = 0
    for q in PRIME_POWERS_TO_9:
        if q > q_max:
            continue
        field = field_for(q)
        for n in range(1, n_max + 1):
            x = RingElement.x_power(field, n, 1)
            power = RingElement.one(field, n)
            seen = set()
            for _ in range(n):
                if not is_restricted_unit(power):
                    _fail("x subgroup", f"(n, q)=({n}, {q})",
                          f"power {power.coeffs} is not a restricted unit")
                seen.add(power.coeffs)
                power = power * x
            if power != RingElement.one(field, n) or len(seen) != n:
                _fail("x subgroup", f"(n, q)=({n}, {q})",
                      f"<x> has {len(seen)} elements, x^n - 1 {'=' if power == RingElement.one(field, n) else '!'}= 0")
            checks += 1
    return checks


def check_circulant_brute(
    n_max: int = 40,
    q_max: int = 9,
    cap: int | None = None,
    progress: Progress = None,
) -> int:
    """Exhaustive-enumeration agreement for every (n, q) under the cap:
    C'(n, q) and C(n, q) against the closed routes, the quotient against its
    closed route where one exists, and the order identities
    |C| = (q-1)|C'| = (q-1) n |C'/<x>| unconditionally."""
    checks = 0
    limit = enumeration_cap(cap)
    for q in PRIME_POWERS_TO_9:
        if q > q_max:
            continue
        for n in range(1, n_max + 1):
            if q**n > limit:
                break
            if progress:
                progress(f"brute enumeration n={n} q={q} ({q ** n} elements)")
            star_closed, _ = circulant.star_group_closed(n, q)
            star_brute = circulant.unit_group_brute(n, q, restricted=True, cap=limit)
            if star_brute != star_closed:
                _fail("brute star", f"(n, q)=({n}, {q})",
                      f"enumeration {star_brute} vs closed {star_closed}")
            full_brute = circulant.unit_group_brute(n, q, cap=limit)
            full_closed = abelian.direct_sum(star_closed, abelian.from_cyclic_orders([q - 1]))
            if full_brute != full_closed:
                _fail("brute full group", f"(n, q)=({n}, {q})",
                      f"enumeration {full_brute} vs closed {full_closed}")
            quotient_brute = circulant.unit_group_brute(
                n, q, restricted=True, modulo_x=True, cap=limit
            )
            try:
                quotient_closed, _ = circulant.quotient_group_closed(n, q)
            except ValueError:
                quotient_closed = None
            if quotient_closed is not None and quotient_brute != quotient_closed:
                _fail("brute quotient", f"(n, q)=({n}, {q})",
                      f"enumeration {quotient_brute} vs closed {quotient_closed}")
            if star_brute.order != n * quotient_brute.order:
                _fail("brute index", f"(n, q)=({n}, {q})",
                      f"|C'|={star_brute.order} != n*|C'/<x>|={n * quotient_brute.order}")
            checks += 4
    return checks


def witness_non_isomorphism() -> tuple[AbelianGroup, AbelianGroup]:
    """The quotient C'(9, 9)/<x> versus the sandpile group S(9, 9): equal
    orders, provably different structures.  Returns (quotient, sandpile);
    raises if they turn out isomorphic or the orders disagree."""
    counts = circulant.quotient_p_torsion_counts(9, 9)
    quotient = structure_from_torsion_counts(3, counts)
    sandpile = closed_form.sandpile_group(9, 9)
    if sandpile != abelian.from_cyclic_orders([9] * 7):
        _fail("non-isomorphism witness", "(n, q)=(9, 9)",
              f"S(9, 9) = {sandpile}, expected Z_9^7")
    if quotient.order != sandpile.order:
        _fail("non-isomorphism witness", "(n, q)=(9, 9)",
              f"orders differ: {quotient.order} vs {sandpile.order}")
    if quotient == sandpile:
        _fail("non-isomorphism witness", "(n, q)=(9, 9)",
              "quotient and sandpile group are isomorphic; they must differ")
    return quotient, sandpile


# ---------------------------------------------------------------------------
# Multiplicative order lifting
# ---------------------------------------------------------------------------


def check_order_lifting(
    p_max: int = 50,
    d_limit: int = 20,
    modulus_cap: int = 1 << 20,
    iterate_cap: int = 1 << 10,
) -> int:
    """ord(d mod p^t) follows the lifting pattern: constant e = ord(d mod p)
    for t <= a = nu_p(d^e - 1), then e p^(t-a); for p = 2, d = 3 mod 4 the
    pattern is 1, then 2 up to b = nu_2(d^2 - 1), then 2^(t-b+1).  Orders
    are recomputed by literal iteration for moduli up to iterate_cap."""
    checks = 0
    for p in range(2, p_max + 1):
        if not is_prime(p):
            continue
        for d in range(-d_limit, d_limit + 1):
            if abs(d) < 2 or d % p == 0:
                continue
            if p == 2 and d % 4 == 3:
                b = nu(d * d - 1, 2)
                schedule = lambda t: 1 if t == 1 else (2 if t <= b else 2 ** (t - b + 1))
            else:
                e = multiplicative_order(d, p)
                a = nu(d**e - 1, p)
                schedule = lambda t: e if t <= a else e * p ** (t - a)
            modulus = p
            t = 1
            while modulus <= modulus_cap:
                expected = schedule(t)
                got = multiplicative_order(d, modulus)
                if got != expected:
                    _fail("order lifting", f"(p, d, t)=({p}, {d}, {t})",
                          f"order {got} vs pattern {expected}")
                checks += 1
                if modulus <= iterate_cap:
                    value = d % modulus
                    steps = 1
                    while value != 1:
                        value = value * d % modulus
                        steps += 1
                    if steps != got:
                        _fail("order iteration", f"(p, d, t)=({p}, {d}, {t})",
                              f"iterated order {steps} vs computed {got}")
                    checks += 1
                modulus *= p
                t += 1
    return checks


# ---------------------------------------------------------------------------
# Battery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    """Scale knobs for the full verification battery."""

    n_max: int = 60
    d_max: int = 8
    q_max: int = 9
    brute_cap: int | None = None


def run_all(config: SweepConfig | None = None, progress: Progress = None) -> dict[str, int]:
    """Run every sweep at the configured scale; returns check counts by name.

    Raises VerificationFailure on the first disagreement.
    """
    cfg = config or SweepConfig()
    small_n = min(cfg.n_max, 40)
    results: dict[str, int] = {}

    def run(name: str, fn, *args, **kwargs) -> None:
        if progress:
            progress(f"[{name}] starting")
        results[name] = fn(*args, **kwargs)

    run("de_bruijn_main", check_de_bruijn_main, cfg.n_max, cfg.d_max, progress)
    run("kautz_main", check_kautz_main, cfg.n_max, cfg.d_max, progress)
    run("index_identity", check_index_identity, cfg.n_max, cfg.d_max)
    run("order_recursion", check_order_recursion, cfg.n_max, cfg.d_max)
    run("crt_split", check_crt_split, cfg.n_max, cfg.d_max)
    run("coprime_cosets", check_coprime_cosets, cfg.n_max, cfg.d_max)
    run("tree_counts", check_tree_counts, min(cfg.n_max, 20), min(cfg.d_max, 4), progress)
    run("generators", check_generators, small_n, cfg.d_max)
    run("element_orders", check_element_orders, cfg.n_max, cfg.d_max)
    run("order_gap", check_order_gap, cfg.n_max, cfg.d_max)
    run("circulant_coprime", check_circulant_coprime, small_n, cfg.q_max)
    run("circulant_prime", check_circulant_prime, small_n, cfg.q_max)
    run("torsion_oracle", check_torsion_oracle, max(cfg.n_max, 64), cfg.q_max)
    run("x_subgroup", check_x_subgroup, min(cfg.n_max, 16), cfg.q_max)
    run("circulant_brute", check_circulant_brute, small_n, cfg.q_max, cfg.brute_cap, progress)
    run("order_lifting", check_order_lifting)
    if progress:
        progress("[non_isomorphism_witness] starting")
    witness_non_isomorphism()
    results["non_isomorphism_witness"] = 3
    return results
