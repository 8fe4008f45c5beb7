"""Exact elementary number theory: gcd/inverses, primes, multiplicative
functions, Bernoulli numbers, Kronecker characters and Gaussian rationals.

Everything here is integer/Fraction arithmetic; no floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "ext_gcd",
    "inv_mod",
    "is_prime",
    "primes_up_to",
    "factorize",
    "divisors",
    "moebius",
    "sigma",
    "jacobi",
    "kronecker",
    "legendre_euler",
    "bernoulli",
    "generalized_bernoulli",
    "fundamental_discriminant_split",
    "GaussRat",
    "ZiModP",
]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


def inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64 bits of desk scale."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, b in enumerate(sieve) if b]


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization ((p, e), ...) of n >= 1 by trial division."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def sigma(k: int, n: int) -> int:
    """Sum of k-th powers of the divisors of n (0 for n <= 0)."""
    if n <= 0:
        return 0
    return sum(d**k for d in divisors(n))


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi requires odd n > 0")
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), the completely multiplicative extension of
    the Jacobi symbol to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 == 1 and a % 8 in (3, 5):
            t = -t
    return t * jacobi(a, n)


def legendre_euler(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion with exact powering."""
    if p == 2 or not is_prime(p):
        raise ValueError("legendre_euler requires an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2), by the defining recurrence, cached."""
    if n < 0:
        raise ValueError("n >= 0")
    while len(_BERNOULLI_CACHE) <= n:
        m = len(_BERNOULLI_CACHE)
        # sum_{k=0}^{m} C(m+1,k) B_k = 0
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * _BERNOULLI_CACHE[k]
        _BERNOULLI_CACHE.append(-acc / (m + 1))
    return _BERNOULLI_CACHE[n]


def kronecker_character_values(D: int) -> list[int]:
    """Table [chi_D(0), ..., chi_D(|D|-1)] of the Kronecker character mod |D|."""
    A = abs(D)
    return [kronecker(D, a) for a in range(A)]


def generalized_bernoulli(n: int, D: int) -> Fraction:
    """Generalized Bernoulli number B_{n,chi} for the Kronecker character
    chi_D, via the finite |D|-term Bernoulli-polynomial formula.

    B_{n,chi} = sum_k C(n,k) B_k |D|^{k-1} S_{n-k},  S_j = sum_a chi(a) a^j.
    """
    A = abs(D)
    chi = kronecker_character_values(D)
    # S_j = sum_{a=0}^{A-1} chi(a) a^j, built by updating a^j in place
    power_sums = []
    powers = [1] * A
    for _j in range(n + 1):
        power_sums.append(sum(c * w for c, w in zip(chi, powers)))
        powers = [powers[a] * a for a in range(A)]
    total = Fraction(0)
    for k in range(n + 1):
        total += math.comb(n, k) * bernoulli(k) * Fraction(A**k, A) * power_sums[n - k]
    return total


def fundamental_discriminant_split(delta: int) -> tuple[int, int]:
    """Write delta = D * f^2 with D a fundamental discriminant.

    Requires delta = 0 or 1 mod 4 and delta != 0.
    """
    if delta == 0 or delta % 4 not in (0, 1):
        raise ValueError("not a discriminant: %d" % delta)
    sign = 1 if delta > 0 else -1
    n = abs(delta)
    f = 1
    for p, e in factorize(n):
        f *= p ** (e // 2)
    core = n // (f * f)
    D = sign * core
    if D % 4 not in (0, 1):
        # move one factor of 2 (possible only when delta = 0 mod 4)
        if f % 2:
            raise ValueError("inconsistent discriminant %d" % delta)
        f //= 2
        D *= 4
    return D, f


class GaussRat:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __repr__(self):
        return "GaussRat(%s, %s)" % (self.re, self.im)

    def __eq__(self, other):
        other = GaussRat._coerce(other)
        return other is not None and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        return None

    def __add__(self, other):
        o = GaussRat._coerce(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRat._coerce(other))

    def __rsub__(self, other):
        return GaussRat._coerce(other) + (-self)

    def __mul__(self, other):
        o = GaussRat._coerce(other)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(i)")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussRat._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussRat(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self):
        return GaussRat(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)


class ZiModP:
    """Arithmetic in Z[i]/(p) for an odd prime p, as pairs (a + b*i) mod p.

    This is F_{p^2} when p = 3 mod 4 and F_p x F_p when p = 1 mod 4; either
    way, x = 0 in the ring iff both components vanish mod p.
    """

    __slots__ = ("p", "a", "b")

    def __init__(self, p: int, a: int, b: int = 0):
        self.p = p
        self.a = a % p
        self.b = b % p

    @classmethod
    def from_gauss(cls, x: GaussRat, p: int) -> "ZiModP":
        for part in (x.re, x.im):
            if part.denominator % p == 0:
                raise ValueError("not %d-integral: %s" % (p, x))
        a = x.re.numerator * inv_mod(x.re.denominator, p)
        b = x.im.numerator * inv_mod(x.im.denominator, p)
        return cls(p, a, b)

    def __repr__(self):
        return "ZiModP(%d, %d + %d i)" % (self.p, self.a, self.b)

    def __eq__(self, other):
        return (
            isinstance(other, ZiModP)
            and self.p == other.p
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.p, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other):
        o = self._coerce(other)
        return ZiModP(self.p, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return ZiModP(self.p, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        return ZiModP(self.p, self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def _coerce(self, x):
        if isinstance(x, ZiModP):
            if x.p != self.p:
                raise ValueError("modulus mismatch")
            return x
        if isinstance(x, int):
            return ZiModP(self.p, x)
        if isinstance(x, GaussRat):
            return ZiModP.from_gauss(x, self.p)
        raise TypeError(type(x))

    def __pow__(self, n: int):
        out = ZiModP(self.p, 1)
        base = self
        if n < 0:
            raise ValueError("negative power in Z[i]/p")
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def frobenius(self, times: int = 1) -> "ZiModP":
        """x -> x^(p^times); on i this is i -> (-1)^((p-1)/2 * times) i."""
        if times % 2 == 0:
            return self
        if self.p % 4 == 3:
            return ZiModP(self.p, self.a, -self.b)
        return self ** self.p
