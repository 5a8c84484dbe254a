"""Small integer utilities: factoring, primes, prime powers, von Mangoldt tables."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, ``{p: e}`` in increasing ``p``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_base(n: int) -> int | None:
    """Return ``p`` if ``n = p^k`` with ``k >= 1``, else ``None``."""
    if n < 2:
        return None
    f = factorize(n)
    if len(f) == 1:
        return next(iter(f))
    return None


def is_cubefree(n: int) -> bool:
    return all(e < 3 for e in factorize(n).values())


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def next_prime_power(n: int) -> int:
    """Smallest prime power strictly greater than ``n``."""
    m = max(n + 1, 2)
    while prime_power_base(m) is None:
        m += 1
    return m


def prev_prime_power(n: int) -> int | None:
    """Largest prime power strictly less than ``n``, or ``None`` when ``n <= 2``."""
    m = n - 1
    while m >= 2:
        if prime_power_base(m) is not None:
            return m
        m -= 1
    return None


@lru_cache(maxsize=8)
def mangoldt_table(n: int) -> np.ndarray:
    """Array ``L`` of length ``n + 1`` with ``L[k] = Lambda(k)``."""
    lam = np.zeros(n + 1)
    if n < 2:
        return lam
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    for p in np.flatnonzero(is_p):
        p = int(p)
        lp = math.log(p)
        pk = p
        while pk <= n:
            lam[pk] = lp
            pk *= p
    lam.setflags(write=False)
    return lam


def primitive_root(m: int) -> int:
    """Smallest primitive root modulo ``m``; ``m`` must be 2, 4, p^k or 2p^k."""
    if m in (1, 2):
        return 1
    if m == 4:
        return 3
    phi = euler_phi(m)
    ps = list(factorize(phi))
    for g in range(2, m):
        if math.gcd(g, m) != 1:
            continue
        if all(pow(g, phi // p, m) != 1 for p in ps):
            return g
    raise ValueError(f"no primitive root modulo {m}")
