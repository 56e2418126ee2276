"""Prime-dependent scalar parameters.

Presentations in the catalog are families over an odd prime p.  Two
residue constants appear in exponents: the smallest positive quadratic
non-residue mod p and the smallest positive primitive root mod p.  Both
are computed exactly by direct search; p never exceeds a few hundred in
practice so nothing cleverer is warranted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _is_quadratic_residue(a: int, p: int) -> bool:
    return pow(a, (p - 1) // 2, p) == 1


def smallest_nonresidue(p: int) -> int:
    for a in range(2, p):
        if not _is_quadratic_residue(a, p):
            return a
    raise InputError(f"no quadratic non-residue mod {p}")


def _multiplicative_order(a: int, p: int) -> int:
    k, x = 1, a % p
    while x != 1:
        x = x * a % p
        k += 1
    return k


def smallest_primitive_root(p: int) -> int:
    for a in range(2, p):
        if _multiplicative_order(a, p) == p - 1:
            return a
    raise InputError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class PrimeParams:
    """Constants attached to an odd prime p.

    nu: smallest positive quadratic non-residue mod p.
    omega: smallest positive primitive root mod p.
    """

    p: int
    nu: int
    omega: int


def resolve_params(p: int) -> PrimeParams:
    """Validate p (odd prime) and compute its residue constants."""
    if not isinstance(p, int) or not is_prime(p):
        raise InputError(f"p = {p!r} is not a prime")
    if p == 2:
        raise InputError("p must be an odd prime")
    return PrimeParams(p=p, nu=smallest_nonresidue(p), omega=smallest_primitive_root(p))
