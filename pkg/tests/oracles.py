"""Independent brute-force oracles used by the test suite.

Deliberately naive and written against no package internals: plain
coefficient lists, schoolbook algorithms, exhaustive enumeration.  When
a test compares engine output to one of these, the two sides share no
code path.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


# --- polynomial quotient ring oracle -------------------------------------

def poly_mul_mod(a: list[Fraction], b: list[Fraction], mod: list[int]) -> list[Fraction]:
    """Schoolbook multiply then long-divide by the (monic) modulus."""
    n = len(mod) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            prod[i + j] += ai * bj
    # long division by monic mod
    for top in range(len(prod) - 1, n - 1, -1):
        c = prod[top]
        if c:
            for k in range(n + 1):
                prod[top - n + k] -= c * mod[k]
    out = prod[:n]
    out += [Fraction(0)] * (n - len(out))
    return out


def poly_pow_mod(a: list[Fraction], e: int, mod: list[int]) -> list[Fraction]:
    assert e >= 0
    n = len(mod) - 1
    result = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(e):
        result = poly_mul_mod(result, a, mod)
    return result


def poly_compose_mod(a: list[Fraction], q: list[Fraction], mod: list[int]) -> list[Fraction]:
    n = len(mod) - 1
    acc = [Fraction(0)] * n
    for c in reversed(a):
        acc = poly_mul_mod(acc, q, mod)
        acc[0] += c
    return acc


# --- finite abelian group oracle ------------------------------------------

def subgroup_order(divisors: list[int], generators: list[list[int]]) -> int:
    """Order of the subgroup of Z/d1 x ... x Z/dk spanned by the generators.

    Exhaustive closure; only usable for small groups (|G| <= a few
    thousand).
    """
    seen = {tuple(0 for _ in divisors)}
    frontier = [tuple(0 for _ in divisors)]
    gens = [tuple(g[i] % divisors[i] for i in range(len(divisors))) for g in generators]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple((c + x) % d for c, x, d in zip(cur, g, divisors))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen)


def group_order(divisors: list[int]) -> int:
    out = 1
    for d in divisors:
        out *= d
    return out


def all_elements(divisors: list[int]):
    return product(*(range(d) for d in divisors))
