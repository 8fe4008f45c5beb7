"""Truncated Laurent series in q^(1/grain) over exact rationals or Z/p^j.

A QSeries stores coefficients for exponent indices in [lo, prec), in units
of q^(1/grain) with grain a divisor of 24; every coefficient below lo is
zero by construction.  Exact coefficients are Python ints or Fractions,
never floats.  When a modulus p^j is set the series lives in Z/p^j and the
dense tail is a numpy int64 vector so that 10^5-term expansions stay fast.

Precision is propagated pessimistically: an operation never reports a
coefficient it cannot prove from the provable windows of its inputs.
All values are immutable after construction; operations return fresh
instances, so sharing across threads is safe without locking.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

__all__ = [
    "QSeries",
    "PrecisionError",
    "ModulusMismatch",
    "NotInvertible",
    "NonIntegralCoefficient",
    "GRAINS",
]

GRAINS = (1, 2, 3, 4, 6, 8, 12, 24)

_FFT_MIN = 4096  # below this, plain integer convolution is faster anyway


class PrecisionError(ValueError):
    """An operation asked for a coefficient outside the provable window."""


class ModulusMismatch(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class NonIntegralCoefficient(ValueError):
    def __init__(self, index: int, grain: int, value):
        self.index = index
        self.grain = grain
        self.value = value
        super().__init__(
            "coefficient %s at exponent %s is not p-integral" % (value, Fraction(index, grain))
        )


_PRIME_POWER_CACHE: dict = {}


def _is_prime_power(m: int) -> tuple[int, int]:
    """Return (p, j) with m = p^j, or raise."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    hit = _PRIME_POWER_CACHE.get(m)
    if hit is not None:
        return hit
    n = m
    p = None
    d = 2
    while d * d <= n:
        if n % d == 0:
            p = d
            break
        d += 1 if d == 2 else 2
    if p is None:
        p = n
    j = 0
    while n % p == 0:
        n //= p
        j += 1
    if n != 1:
        raise ValueError("modulus must be a prime power")
    _PRIME_POWER_CACHE[m] = (p, j)
    return p, j


class QSeries:
    __slots__ = ("grain", "lo", "prec", "head", "tail", "modulus")

    def __init__(self, grain, lo, prec, head, tail, modulus=None, _checked=False):
        self.grain = grain
        self.lo = lo
        self.prec = prec
        self.head = head  # dict {index < 0: coeff}
        self.tail = tail  # coeffs for indices [0, prec); list or int64 array
        self.modulus = modulus  # None or p^j
        if not _checked:
            if grain not in GRAINS:
                raise ValueError("grain must divide 24, got %r" % (grain,))
            if lo > prec:
                raise ValueError("lo > prec")

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_terms(cls, terms, prec, grain=1, modulus=None, lo=None):
        """Build from {index: coeff}; indices in units of q^(1/grain)."""
        if lo is None:
            lo = min(min(terms), 0) if terms else 0
        head = {}
        n_tail = max(prec, 0)
        if modulus is None:
            tail = [0] * n_tail
        else:
            tail = np.zeros(n_tail, dtype=np.int64)
        for k, v in terms.items():
            if not (lo <= k < prec):
                raise ValueError("term index %d outside [lo, prec)" % k)
            if modulus is not None:
                v = int(v) % modulus
            elif isinstance(v, Fraction) and v.denominator == 1:
                v = int(v)
            if k < 0:
                if v:
                    head[k] = v
            else:
                tail[k] = v
        return cls(grain, lo, prec, head, tail, modulus)

    @classmethod
    def zero(cls, prec, grain=1, modulus=None):
        return cls.from_terms({}, prec, grain=grain, modulus=modulus, lo=0)

    @classmethod
    def one(cls, prec, grain=1, modulus=None):
        return cls.from_terms({0: 1}, prec, grain=grain, modulus=modulus, lo=0)

    @classmethod
    def monomial(cls, coeff, index, prec, grain=1, modulus=None):
        return cls.from_terms({index: coeff}, prec, grain=grain, modulus=modulus,
                              lo=min(index, 0))

    @classmethod
    def from_coeff_list(cls, coeffs, prec=None, grain=1, modulus=None, start=0):
        """Dense construction; coeffs[i] is the coefficient of index start+i."""
        if prec is None:
            prec = start + len(coeffs)
        terms = {start + i: c for i, c in enumerate(coeffs) if c}
        return cls.from_terms(terms, prec, grain=grain, modulus=modulus,
                              lo=min(start, 0))

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def mod_pj(self):
        """(p, j) for the modulus, or None."""
        if self.modulus is None:
            return None
        return _is_prime_power(self.modulus)

    def coeff(self, index: int):
        """Coefficient at exponent index (units q^(1/grain))."""
        if index < self.lo:
            return 0
        if index >= self.prec:
            raise PrecisionError(
                "coefficient at index %d not provable (prec %d)" % (index, self.prec)
            )
        if index < 0:
            return self.head.get(index, 0)
        v = self.tail[index]
        return int(v) if self.modulus is not None else v

    def coeff_q(self, exponent):
        """Coefficient of q^exponent for a Fraction or integer exponent."""
        e = Fraction(exponent) * self.grain
        if e.denominator != 1:
            if Fraction(exponent) < Fraction(self.prec, self.grain):
                return 0
            raise PrecisionError("exponent %s beyond provable window" % (exponent,))
        return self.coeff(int(e))

    def items(self):
        """Yield (index, coeff) for all nonzero stored coefficients, ascending."""
        for k in sorted(self.head):
            yield k, self.head[k]
        for k in range(max(self.lo, 0), self.prec):
            v = self.tail[k]
            if v:
                yield k, (int(v) if self.modulus is not None else v)

    def valuation(self):
        """Smallest index with a nonzero coefficient, or None if zero on window."""
        for k, _v in self.items():
            return k
        return None

    def leading(self):
        for k, v in self.items():
            return k, v
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def __repr__(self):
        bits = []
        for k, v in self.items():
            bits.append("%s*q^(%s)" % (v, Fraction(k, self.grain)))
            if len(bits) >= 6:
                bits.append("...")
                break
        body = " + ".join(bits) if bits else "0"
        mod = " mod %d" % self.modulus if self.modulus else ""
        return "QSeries(%s + O(q^(%s))%s)" % (body, Fraction(self.prec, self.grain), mod)

    # ------------------------------------------------------------------
    # structural helpers

    def _dense(self):
        """Contiguous coefficient vector on [base, prec) with base = min(lo, 0)."""
        base = min(self.lo, 0)
        n = self.prec - base
        if self.modulus is None:
            v = [0] * n
            for k, c in self.head.items():
                v[k - base] = c
            for k in range(max(self.lo, 0), self.prec):
                v[k - base] = self.tail[k]
        else:
            v = np.zeros(n, dtype=np.int64)
            for k, c in self.head.items():
                v[k - base] = c
            if self.prec > 0:
                v[-self.prec :] = self.tail[: self.prec]
        return base, v

    @classmethod
    def _from_dense(cls, base, vec, prec, grain, modulus, lo):
        """Build from a contiguous vector: vec[i] is the coefficient at base+i.
        Indices outside [base, base+len(vec)) are taken as zero."""
        head = {}
        n_tail = max(prec, 0)
        if modulus is None:
            tail = [0] * n_tail
            for i, c in enumerate(vec):
                k = base + i
                if k >= prec:
                    break
                if not c:
                    continue
                if k < 0:
                    head[k] = c
                else:
                    tail[k] = c
        else:
            tail = np.zeros(n_tail, dtype=np.int64)
            for i in range(min(len(vec), max(prec - base, 0))):
                k = base + i
                if k < 0:
                    c = int(vec[i]) % modulus
                    if c:
                        head[k] = c
            if prec > 0:
                dst_from = max(base, 0)
                src_from = dst_from - base
                count = min(len(vec) - src_from, prec - dst_from)
                if count > 0:
                    seg = np.asarray(vec[src_from : src_from + count], dtype=np.int64)
                    tail[dst_from : dst_from + count] = seg % modulus
        return cls(grain, lo, prec, head, tail, modulus)

    def _converted(self, grain):
        """Rescale to a finer grid (grain must be a multiple of self.grain).

        The provable q-exponent window [lo/g, prec/g) is unchanged, so the
        new prec index is prec * (grain // g): off-grid coefficients inside
        the window are known to be zero.
        """
        if grain == self.grain:
            return self
        if grain % self.grain:
            raise ValueError("cannot convert grain %d -> %d" % (self.grain, grain))
        s = grain // self.grain
        new_prec = self.prec * s
        head = {k * s: v for k, v in self.head.items()}
        if self.modulus is None:
            tail = [0] * max(new_prec, 0)
            for k in range(max(self.lo, 0), self.prec):
                if self.tail[k]:
                    tail[k * s] = self.tail[k]
        else:
            tail = np.zeros(max(new_prec, 0), dtype=np.int64)
            if self.prec > 0:
                tail[: (self.prec - 1) * s + 1 : s] = self.tail[: self.prec]
        return QSeries(grain, self.lo * s, new_prec, head, tail, self.modulus)

    def _common(self, other):
        if self.modulus != other.modulus:
            raise ModulusMismatch(
                "moduli differ: %r vs %r" % (self.modulus, other.modulus)
            )
        g = self.grain * other.grain // math.gcd(self.grain, other.grain)
        return self._converted(g), other._converted(g)

    def _with_tight_lo(self) -> "QSeries":
        """Raise lo to the actual valuation; sound because the window is
        fully computed, and it improves later precision propagation."""
        v = self.valuation()
        tight = self.prec if v is None else v
        if tight <= self.lo:
            return self
        return QSeries(self.grain, tight, self.prec, self.head, self.tail,
                       self.modulus, _checked=True)

    def truncate(self, prec: int) -> "QSeries":
        if prec >= self.prec:
            return self
        head = {k: v for k, v in self.head.items() if k < prec}
        tail = self.tail[: max(prec, 0)]
        if self.modulus is None:
            tail = list(tail)
        return QSeries(self.grain, min(self.lo, prec), prec, head, tail, self.modulus)

    def normalize_grain(self) -> "QSeries":
        """Shrink the grain when every nonzero index allows it."""
        idxs = [k for k, _ in self.items()]
        d = self.grain
        for k in idxs:
            d = math.gcd(d, k)
            if d == 1:
                return self
        if d == self.grain == 1:
            return self
        if d == 0:
            d = self.grain
        g2 = self.grain // d
        terms = {k // d: v for k, v in self.items()}
        prec2 = -(-self.prec // d)
        return QSeries.from_terms(terms, prec2, grain=g2, modulus=self.modulus,
                                  lo=self.lo // d if self.lo <= 0 else 0)

    # ------------------------------------------------------------------
    # ring operations

    def __neg__(self):
        head = {k: -v for k, v in self.head.items()}
        if self.modulus is None:
            tail = [-c for c in self.tail]
        else:
            tail = (-np.asarray(self.tail)) % self.modulus
        return QSeries(self.grain, self.lo, self.prec, head, tail, self.modulus)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.monomial(other, 0, self.prec, grain=self.grain,
                                     modulus=self.modulus)
        a, b = self._common(other)
        prec = min(a.prec, b.prec)
        lo = min(a.lo, b.lo)
        head = dict(a.head)
        for k, v in b.head.items():
            head[k] = head.get(k, 0) + v
        head = {k: v for k, v in head.items() if v and k < prec}
        n_tail = max(prec, 0)
        if a.modulus is None:
            tail = [0] * n_tail
            for k in range(n_tail):
                s = 0
                if k < a.prec:
                    s += a.tail[k]
                if k < b.prec:
                    s += b.tail[k]
                tail[k] = s
        else:
            tail = np.zeros(n_tail, dtype=np.int64)
            tail[: min(a.prec, n_tail)] += np.asarray(a.tail[:n_tail])
            tail[: min(b.prec, n_tail)] += np.asarray(b.tail[:n_tail])
            tail %= a.modulus
            head = {k: v % a.modulus for k, v in head.items() if v % a.modulus}
        return QSeries(a.grain, lo, prec, head, tail, a.modulus)._with_tight_lo()

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.monomial(other, 0, self.prec, grain=self.grain,
                                     modulus=self.modulus)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def _scalar_mul(self, c):
        if self.modulus is not None:
            c = int(c) % self.modulus
            head = {k: (v * c) % self.modulus for k, v in self.head.items()}
            head = {k: v for k, v in head.items() if v}
            tail = (np.asarray(self.tail) * c) % self.modulus
        else:
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            head = {k: v * c for k, v in self.head.items() if v * c}
            tail = [v * c for v in self.tail]
        return QSeries(self.grain, self.lo, self.prec, head, tail, self.modulus)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scalar_mul(other)
        a, b = self._common(other)
        prec = min(a.lo + b.prec, b.lo + a.prec)
        lo = a.lo + b.lo
        if prec <= lo:
            return QSeries(a.grain, lo, prec, {}, [] if a.modulus is None
                           else np.zeros(0, dtype=np.int64), a.modulus)
        if a.modulus is None:
            return QSeries._mul_exact(a, b, lo, prec)
        return QSeries._mul_mod(a, b, lo, prec)

    def __rmul__(self, other):
        return self.__mul__(other)

    @staticmethod
    def _mul_exact(a, b, lo, prec):
        ta = list(a.items())
        tb = list(b.items())
        if len(tb) < len(ta):
            ta, tb = tb, ta
        n = prec - lo
        out = [0] * n
        for ka, ca in ta:
            for kb, cb in tb:
                k = ka + kb
                if k >= prec:
                    break
                out[k - lo] += ca * cb
        return QSeries._from_dense(lo, out, prec, a.grain, None, lo)._with_tight_lo()

    @staticmethod
    def _mul_mod(a, b, lo, prec):
        m = a.modulus
        base_a, va = a._dense()
        base_b, vb = b._dense()
        conv = _mod_conv(va, vb, m)
        return QSeries._from_dense(base_a + base_b, conv, prec, a.grain, m, lo)._with_tight_lo()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("powers must be integers")
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            return QSeries.one(max(self.prec, 1), grain=self.grain,
                               modulus=self.modulus)
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def invert(self, target_prec=None) -> "QSeries":
        """Multiplicative inverse; leading coefficient must be a unit.

        target_prec requests the product window: self * result = 1 + O(q^(t/grain)).
        """
        lead = self.leading()
        if lead is None:
            raise NotInvertible("cannot invert the zero series")
        v, c = lead
        m = self.modulus
        if m is None:
            if c == 0:
                raise NotInvertible("zero leading coefficient")
            c_inv = Fraction(1, 1) / Fraction(c)
        else:
            p, _j = _is_prime_power(m)
            if int(c) % p == 0:
                raise NotInvertible("leading coefficient %d not a unit mod %d" % (c, m))
            c_inv = pow(int(c), -1, m)
        provable = self.prec - v  # length of the unit part we know
        want = provable if target_prec is None else target_prec
        if want > provable:
            raise PrecisionError(
                "invert needs %d known terms past the valuation, have %d"
                % (want, provable)
            )
        n = want
        # u = self shifted to start at 0
        base, vec = self._dense()
        off = v - base
        if m is None:
            u = vec[off : off + n]
            inv = [0] * n
            inv[0] = c_inv
            for k in range(1, n):
                s = 0
                for i in range(1, k + 1):
                    if u[i]:
                        s += u[i] * inv[k - i]
                inv[k] = -c_inv * s
        else:
            u = np.asarray(vec[off : off + n], dtype=np.int64)
            inv = _mod_invert(u, m, n, int(c_inv))
        terms = {}
        for k in range(n):
            if inv[k]:
                terms[k - v] = inv[k]
        return QSeries.from_terms(terms, prec=n - v, grain=self.grain, modulus=m,
                                  lo=-v)

    def divide(self, other, target_prec=None) -> "QSeries":
        return self * other.invert(target_prec)

    # ------------------------------------------------------------------
    # operators on exponents

    def u_operator(self, p: int) -> "QSeries":
        """Coefficient extraction a(n) -> a(p*n); integer exponent grid only."""
        if self.grain != 1:
            raise ValueError("U_p requires an integer exponent grid (grain 1)")
        if p < 1:
            raise ValueError("p must be positive")
        if p == 1:
            return self
        lo = -(-self.lo // p)
        prec = -(-self.prec // p)
        terms = {}
        for k, v in self.items():
            if k % p == 0:
                terms[k // p] = v
        return QSeries.from_terms(terms, prec, grain=1, modulus=self.modulus, lo=lo)

    def expand_scale(self, mfac: int) -> "QSeries":
        """Substitute q -> q^mfac; indices scale by mfac and intermediate
        exponents are known zero, so the provable window scales too."""
        if mfac < 1:
            raise ValueError("scale must be positive")
        if mfac == 1:
            return self
        prec = self.prec * mfac
        terms = {k * mfac: v for k, v in self.items()}
        return QSeries.from_terms(terms, prec, grain=self.grain, modulus=self.modulus,
                                  lo=self.lo * mfac)

    def shift_exp(self, d: int) -> "QSeries":
        """Multiply by q^(d/grain)."""
        terms = {k + d: v for k, v in self.items()}
        return QSeries.from_terms(terms, self.prec + d, grain=self.grain,
                                  modulus=self.modulus, lo=self.lo + d)

    # ------------------------------------------------------------------
    # reductions

    def reduce_mod(self, p: int, j: int = 1) -> "QSeries":
        """Image in Z/p^j; every provable coefficient must be p-integral."""
        m = p**j
        if self.modulus is not None:
            p0, j0 = _is_prime_power(self.modulus)
            if p0 != p or j > j0:
                raise ModulusMismatch(
                    "cannot reduce mod %d^%d from modulus %d" % (p, j, self.modulus)
                )
            terms = {k: int(v) % m for k, v in self.items()}
            return QSeries.from_terms(terms, self.prec, grain=self.grain, modulus=m,
                                      lo=self.lo)
        terms = {}
        for k, v in self.items():
            if isinstance(v, Fraction):
                if v.denominator % p == 0:
                    raise NonIntegralCoefficient(k, self.grain, v)
                r = v.numerator * pow(v.denominator, -1, m) % m
            else:
                r = v % m
            if r:
                terms[k] = r
        return QSeries.from_terms(terms, self.prec, grain=self.grain, modulus=m,
                                  lo=self.lo)

    def lift_integers(self) -> "QSeries":
        """Forget the modulus, keeping canonical residues as integers."""
        terms = dict(self.items())
        return QSeries.from_terms(terms, self.prec, grain=self.grain, modulus=None,
                                  lo=self.lo)

    # ------------------------------------------------------------------
    # comparison and serialization

    def same_on_common_range(self, other) -> bool:
        a, b = self._common(other)
        prec = min(a.prec, b.prec)
        lo = min(a.lo, b.lo)
        for k in range(lo, prec):
            va = a.coeff(k) if k >= a.lo else 0
            vb = b.coeff(k) if k >= b.lo else 0
            if va != vb:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.grain == other.grain
            and self.lo == other.lo
            and self.prec == other.prec
            and self.modulus == other.modulus
            and dict(self.items()) == dict(other.items())
        )

    def __hash__(self):
        return hash((self.grain, self.lo, self.prec, self.modulus,
                     tuple(self.items())))

    def to_json_obj(self):
        coeffs = []
        for k, v in self.items():
            if self.modulus is not None:
                coeffs.append([k, int(v)])
            else:
                f = Fraction(v)
                coeffs.append([k, "%d/%d" % (f.numerator, f.denominator)])
        obj = {"grain": self.grain, "lo": self.lo, "prec": self.prec}
        if self.modulus is not None:
            obj["modulus"] = self.modulus
        obj["coeffs"] = coeffs
        return obj

    @classmethod
    def from_json_obj(cls, obj) -> "QSeries":
        modulus = obj.get("modulus")
        terms = {}
        for k, v in obj["coeffs"]:
            if isinstance(v, str):
                num, den = v.split("/")
                terms[int(k)] = Fraction(int(num), int(den))
            else:
                terms[int(k)] = int(v)
        return cls.from_terms(terms, obj["prec"], grain=obj["grain"], modulus=modulus,
                              lo=obj["lo"])


# ----------------------------------------------------------------------
# modular convolution helpers


def _mod_conv(x: np.ndarray, y: np.ndarray, m: int) -> np.ndarray:
    """Exact convolution of residue vectors, reduced mod m."""
    if len(x) == 0 or len(y) == 0:
        return np.zeros(0, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64) % m
    y = np.asarray(y, dtype=np.int64) % m
    bound = (m - 1) * (m - 1) * min(len(x), len(y))
    n_out = len(x) + len(y) - 1
    if bound < (1 << 62) and n_out <= _FFT_MIN:
        return np.convolve(x, y) % m
    if bound < (1 << 50):
        out = _fft_conv_int(x, y)
        if out is not None:
            return out % m
    if bound < (1 << 62):
        return np.convolve(x, y) % m
    # digit-split fallback for very large moduli
    B = 1 << 16
    x0, x1 = x % B, x // B
    y0, y1 = y % B, y // B
    r = np.convolve(x0, y0) % m
    r = (r + (np.convolve(x0, y1) % m) * (B % m)) % m
    r = (r + (np.convolve(x1, y0) % m) * (B % m)) % m
    r = (r + (np.convolve(x1, y1) % m) * (B * B % m)) % m
    return r


def _fft_conv_int(x: np.ndarray, y: np.ndarray):
    """Float FFT convolution rounded back to integers, with a safety margin
    check; returns None when rounding cannot be certified."""
    n_out = len(x) + len(y) - 1
    size = 1
    while size < n_out:
        size <<= 1
    fx = np.fft.rfft(x, size)
    fy = np.fft.rfft(y, size)
    prod = np.fft.irfft(fx * fy, size)[:n_out]
    rounded = np.rint(prod)
    if np.max(np.abs(prod - rounded)) > 0.01:
        return None
    return rounded.astype(np.int64)


def _mod_invert(u: np.ndarray, m: int, n: int, c_inv: int) -> np.ndarray:
    """Inverse of a unit power series mod m to n terms (Newton iteration)."""
    if n <= 64:
        inv = np.zeros(n, dtype=np.int64)
        inv[0] = c_inv
        for k in range(1, n):
            s = int(np.dot(u[1 : k + 1], inv[k - 1 :: -1]) % m)
            inv[k] = (-c_inv * s) % m
        return inv
    k = 1
    inv = np.array([c_inv], dtype=np.int64)
    while k < n:
        k2 = min(2 * k, n)
        t = _mod_conv(u[:k2], inv, m)[:k2]
        t = (-t) % m
        t[0] = (t[0] + 2) % m
        inv = _mod_conv(inv, t, m)[:k2]
        k = k2
    return inv[:n]
