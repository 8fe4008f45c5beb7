"""Eta quotients and theta series: exact expansions at infinity, exact
orders at cusps, and numeric evaluation on the upper half-plane.

Expansions are driven by the pentagonal-number series of prod(1-q^n):
multiplying or dividing by one eta factor touches O(sqrt(prec)) terms per
coefficient, which keeps 10^5-term residue-mode expansions fast without
ever forming a quotient with huge exact intermediates.

Numeric evaluation reduces the argument to the standard fundamental
domain and applies the eta transformation law once, with the root-of-unity
multiplier built from an exact Dedekind sum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import ext_gcd
from .series import QSeries

__all__ = [
    "EtaQuotient",
    "EtaCombination",
    "TernaryThetaDiff",
    "CuspInfo",
    "cusp_set",
    "group_index",
    "ligozat_order",
    "dedekind_sum",
    "eta_eval",
    "eta_series",
    "eta_quotient_series",
    "theta_series",
    "theta_eta_quotient",
    "cusp_constant",
    "eval_truncated",
]


# ----------------------------------------------------------------------
# pentagonal machinery

def _pentagonal_terms(limit: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of prod(1-q^n) with exponent < limit."""
    out = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        s = -1 if k % 2 else 1
        added = False
        if e1 < limit:
            out.append((e1, s))
            added = True
        if e2 < limit:
            out.append((e2, s))
            added = True
        if not added:
            break
        k += 1
    return out


def _euler_mul_exact(vec: list, m: int) -> list:
    n = len(vec)
    out = [0] * n
    for e, s in _pentagonal_terms(n // m + 1):
        sh = m * e
        if sh >= n:
            continue
        if s == 1:
            for k in range(sh, n):
                out[k] += vec[k - sh]
        else:
            for k in range(sh, n):
                out[k] -= vec[k - sh]
    return out


def _euler_div_exact(vec: list, m: int) -> list:
    n = len(vec)
    pents = [(m * e, s) for e, s in _pentagonal_terms(n // m + 1) if e > 0 and m * e < n]
    out = [0] * n
    for k in range(n):
        acc = vec[k]
        for sh, s in pents:
            if sh > k:
                break
            if s == 1:
                acc -= out[k - sh]
            else:
                acc += out[k - sh]
        out[k] = acc
    return out


def _euler_mul_mod(arr: np.ndarray, m: int, mod: int) -> np.ndarray:
    n = len(arr)
    out = np.zeros(n, dtype=np.int64)
    for e, s in _pentagonal_terms(n // m + 1):
        sh = m * e
        if sh >= n:
            continue
        if s == 1:
            out[sh:] += arr[: n - sh]
        else:
            out[sh:] -= arr[: n - sh]
    return out % mod


_euler_inverse_cache: dict = {}


def _euler_inverse_mod(m: int, n: int, mod: int) -> np.ndarray:
    """Coefficients of 1/prod(1-q^(m k)) to n terms, mod `mod` (cached)."""
    key = (m, mod)
    cached = _euler_inverse_cache.get(key)
    if cached is None or len(cached) < n:
        terms = {m * e: s for e, s in _pentagonal_terms(n // m + 1) if m * e < n}
        P = QSeries.from_terms(terms, n, modulus=mod, lo=0)
        inv = P.invert()
        base, vec = inv._dense()
        out = np.zeros(n, dtype=np.int64)
        out[: len(vec)] = vec[:n]
        _euler_inverse_cache[key] = out
        cached = out
    return cached[:n]


def _euler_div_mod(arr: np.ndarray, m: int, mod: int) -> np.ndarray:
    from .series import _mod_conv

    n = len(arr)
    inv = _euler_inverse_mod(m, n, mod)
    return _mod_conv(arr, inv, mod)[:n] % mod


# ----------------------------------------------------------------------
# eta quotients

@dataclass(frozen=True)
class EtaQuotient:
    """Formal product prod_m eta(m z)^(r_m)."""

    factors: tuple[tuple[int, int], ...]
    level: int = 0

    def __post_init__(self):
        ms = [m for m, _ in self.factors]
        if len(set(ms)) != len(ms) or any(m <= 0 for m in ms):
            raise ValueError("arguments m must be distinct and positive")
        object.__setattr__(
            self, "factors", tuple(sorted((m, r) for m, r in self.factors if r))
        )

    @property
    def weight2(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def lead24(self) -> int:
        """Leading exponent at infinity in units of q^(1/24)."""
        return sum(m * r for m, r in self.factors)

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        d = dict(self.factors)
        for m, r in other.factors:
            d[m] = d.get(m, 0) + r
        return EtaQuotient(tuple(d.items()), level=max(self.level, other.level))

    def __pow__(self, n: int) -> "EtaQuotient":
        return EtaQuotient(tuple((m, r * n) for m, r in self.factors), level=self.level)

    def inverse(self) -> "EtaQuotient":
        return self**-1

    def scale_argument(self, c: int) -> "EtaQuotient":
        """eta(m z) -> eta(m c z) in every factor."""
        return EtaQuotient(tuple((m * c, r) for m, r in self.factors), level=self.level * c)

    # -- expansion ------------------------------------------------------

    def expansion(self, n_terms: int, modulus=None) -> QSeries:
        """q-expansion at infinity with n_terms provable integer-q steps
        past the leading exponent."""
        key = (self.factors, modulus)
        cached = _expansion_cache.get(key)
        if cached is None or cached[0] < n_terms:
            vec = self._integer_part(n_terms, modulus)
            _expansion_cache[key] = (n_terms, vec)
        else:
            vec = cached[1][:n_terms]
        lead = self.lead24
        g = 24 // math.gcd(24, lead if lead else 24)
        shift = lead * g // 24
        if modulus is None:
            terms = {k * g + shift: v for k, v in enumerate(vec) if v}
        else:
            terms = {k * g + shift: int(v) for k, v in enumerate(vec) if v}
        return QSeries.from_terms(
            terms, n_terms * g + shift, grain=g, modulus=modulus,
            lo=min(shift, 0),
        )

    def expansion_to(self, q_prec: int, modulus=None) -> QSeries:
        """Expansion provable for all exponents < q_prec (q-units)."""
        n = max(q_prec - self.lead24 // 24 + 1, 1)
        s = self.expansion(n, modulus=modulus)
        return s.truncate(q_prec * s.grain)

    def _integer_part(self, n: int, modulus):
        """prod_m prod(1-q^(m k))^(r_m) to n terms; multiplications first so
        every exact intermediate stays a holomorphic product."""
        pos = [(m, r) for m, r in self.factors if r > 0]
        neg = [(m, -r) for m, r in self.factors if r < 0]
        if modulus is None:
            vec = [0] * n
            if n:
                vec[0] = 1
            for m, r in pos:
                for _ in range(r):
                    vec = _euler_mul_exact(vec, m)
            for m, r in neg:
                for _ in range(r):
                    vec = _euler_div_exact(vec, m)
        else:
            vec = np.zeros(n, dtype=np.int64)
            if n:
                vec[0] = 1
            for m, r in pos:
                for _ in range(r):
                    vec = _euler_mul_mod(vec, m, modulus)
            for m, r in neg:
                for _ in range(r):
                    vec = _euler_div_mod(vec, m, modulus)
        return vec

    # -- numerics -------------------------------------------------------

    def eval(self, tau: complex, tol: float = 1e-12) -> complex:
        out = 1.0 + 0.0j
        for m, r in self.factors:
            out *= eta_eval(m * tau, tol) ** r
        return out


_expansion_cache: dict = {}


class EtaCombination:
    """Rational-linear combination of eta quotients (closed under products)."""

    def __init__(self, terms):
        merged: dict[tuple, list] = {}
        for c, eq in terms:
            c = Fraction(c)
            if not c:
                continue
            key = eq.factors
            if key in merged:
                merged[key][0] += c
            else:
                merged[key] = [c, eq]
        self.terms = tuple((c, eq) for c, eq in merged.values() if c)

    @classmethod
    def single(cls, eq: EtaQuotient, coeff=1) -> "EtaCombination":
        return cls([(Fraction(coeff), eq)])

    @property
    def weight2(self) -> int:
        ws = {eq.weight2 for _, eq in self.terms}
        if len(ws) > 1:
            raise ValueError("mixed weights in combination")
        return ws.pop() if ws else 0

    def __add__(self, other: "EtaCombination") -> "EtaCombination":
        return EtaCombination(list(self.terms) + list(other.terms))

    def __sub__(self, other: "EtaCombination") -> "EtaCombination":
        return self + other.scaled(-1)

    def scaled(self, c) -> "EtaCombination":
        return EtaCombination([(Fraction(c) * c0, eq) for c0, eq in self.terms])

    def __mul__(self, other):
        if isinstance(other, EtaQuotient):
            return EtaCombination([(c, eq * other) for c, eq in self.terms])
        if isinstance(other, EtaCombination):
            out = []
            for c1, e1 in self.terms:
                for c2, e2 in other.terms:
                    out.append((c1 * c2, e1 * e2))
            return EtaCombination(out)
        return self.scaled(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "EtaCombination":
        if n < 0:
            raise ValueError("negative powers only via a single quotient")
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        if out is None:
            return EtaCombination.single(EtaQuotient(()))
        return out

    def expansion_to(self, q_prec: int, modulus=None) -> QSeries:
        out = None
        for c, eq in self.terms:
            s = eq.expansion_to(q_prec, modulus=modulus)
            if modulus is not None:
                p = modulus
                if isinstance(c, Fraction):
                    cm = c.numerator * pow(c.denominator, -1, p) % p
                else:
                    cm = int(c) % p
                s = s * cm
            else:
                s = s * c
            out = s if out is None else out + s
        if out is None:
            return QSeries.zero(q_prec, modulus=modulus)
        return out

    def eval(self, tau: complex, tol: float = 1e-12) -> complex:
        return sum(complex(c) * eq.eval(tau, tol) for c, eq in self.terms)


class TernaryThetaDiff:
    """The weight-3/2 difference of ternary theta series
    (1/6) (sum q^(3x^2 + 2(y^2+z^2+yz)) - sum q^(3x^2 + 4y^2+4z^2+4yz)),
    expanded by direct lattice enumeration."""

    weight2 = 3

    def _counts(self, prec: int):
        # c2[w] = #{(y,z): y^2 + z^2 + yz = w}, w < prec
        c2 = np.zeros(max(prec, 1), dtype=np.int64)
        ymax = math.isqrt(2 * prec) + 1
        for y in range(-ymax, ymax + 1):
            for z in range(-ymax, ymax + 1):
                w = y * y + z * z + y * z
                if w < prec:
                    c2[w] += 1
        return c2

    def series(self, prec: int, modulus=None) -> QSeries:
        c2 = self._counts(prec)
        out = np.zeros(prec, dtype=np.int64)
        x = 0
        while 3 * x * x < prec:
            xs = 3 * x * x
            mult = 1 if x == 0 else 2
            n2 = (prec - 1 - xs) // 2 + 1
            out[xs : xs + 2 * n2 : 2] += mult * c2[:n2]
            n4 = (prec - 1 - xs) // 4 + 1
            out[xs : xs + 4 * n4 : 4] -= mult * c2[:n4]
            x += 1
        terms = {}
        for k in range(prec):
            v = int(out[k])
            if v % 6:
                raise ValueError("ternary theta difference not divisible by 6")
            v //= 6
            if v:
                terms[k] = v
        s = QSeries.from_terms(terms, prec, lo=0)
        if modulus is not None:
            s = s.reduce_mod(*_pj(modulus))
        return s

    def eval(self, tau: complex, tol: float = 1e-12) -> complex:
        im = tau.imag
        if im <= 0:
            raise ValueError("need Im(tau) > 0")
        prec = int(-math.log(tol * 0.01) / (2 * math.pi * im)) + 8
        s = self.series(prec)
        return eval_truncated(s, tau)


def _pj(modulus: int) -> tuple[int, int]:
    from .series import _is_prime_power

    return _is_prime_power(modulus)


# ----------------------------------------------------------------------
# named constructors

def eta_series(prec: int) -> QSeries:
    """eta(z) = q^(1/24) prod(1-q^n) on grain 24, prec pentagonal terms."""
    if prec <= 0:
        raise ValueError("prec must be positive")
    return EtaQuotient(((1, 1),)).expansion(prec)


def eta_quotient_series(spec: EtaQuotient, prec: int, modulus=None) -> QSeries:
    if prec <= 0:
        raise ValueError("prec must be positive")
    return spec.expansion(prec, modulus=modulus)


def theta_series(prec: int, modulus=None) -> QSeries:
    """theta(z) = 1 + 2 sum q^(n^2), integer grid."""
    terms = {0: 1}
    n = 1
    while n * n < prec:
        terms[n * n] = 2
        n += 1
    s = QSeries.from_terms(terms, prec, lo=0)
    if modulus is not None:
        s = s.reduce_mod(*_pj(modulus))
    return s


def theta_eta_quotient(arg_scale: int = 1) -> EtaQuotient:
    """theta(c z) as the quotient eta(2cz)^5 / (eta(cz)^2 eta(4cz)^2)."""
    base = EtaQuotient(((2, 5), (1, -2), (4, -2)), level=4)
    return base.scale_argument(arg_scale) if arg_scale != 1 else base


# ----------------------------------------------------------------------
# cusps

@dataclass(frozen=True)
class CuspInfo:
    """Cusp a/c of Gamma0(level); infinity is encoded as (1, 0)."""

    a: int
    c: int
    width: int
    regular: bool
    shift: Fraction

    @property
    def is_infinity(self) -> bool:
        return self.c == 0

    def label(self) -> str:
        if self.c == 0:
            return "oo"
        return "%d/%d" % (self.a, self.c)


_CUSP_REPS = {
    4: ((1, 0), (0, 1), (1, 2)),
    8: ((1, 0), (0, 1), (1, 2), (1, 4)),
    12: ((1, 0), (0, 1), (1, 2), (1, 3), (1, 4), (1, 6)),
    16: ((1, 0), (0, 1), (1, 2), (1, 4), (3, 4), (1, 8)),
}

_REGULAR_COUNT = {4: 2, 8: 3, 12: 4, 16: 6}


def group_index(level: int) -> int:
    """Index of Gamma0(level) in the modular group."""
    idx = level
    seen = set()
    n = level
    for p in range(2, level + 1):
        if p * p > n:
            break
        if n % p == 0:
            seen.add(p)
            while n % p == 0:
                n //= p
    if n > 1:
        seen.add(n)
    for p in seen:
        idx = idx * (p + 1) // p
    return idx


def ligozat_order(spec: EtaQuotient, cusp, level: int) -> Fraction:
    """Order of vanishing at the cusp in local-uniformizer units.

    The normalization (level / (24 gcd(c^2, level))) sum_m gcd(c,m)^2 r_m/m
    makes the orders sum to (weight/12) * index over inequivalent cusps.
    `cusp` is a CuspInfo or a bare denominator c (0 meaning infinity).
    """
    c = cusp.c if isinstance(cusp, CuspInfo) else int(cusp)
    if c == 0:
        c = level
    acc = Fraction(0)
    for m, r in spec.factors:
        g = math.gcd(c, m)
        acc += Fraction(g * g * r, m)
    return Fraction(level, 24 * math.gcd(c * c, level)) * acc


def _theta_shift(c: int, level: int) -> Fraction:
    """Fractional part of theta's order at a denominator-c cusp; this is the
    grid shift r(t), identical for every form of half-integral weight."""
    o = ligozat_order(theta_eta_quotient(), c, level)
    return o - math.floor(o)


def cusp_set(level: int) -> list[CuspInfo]:
    """The inequivalent cusps at the supported levels, in a fixed order
    starting at infinity, with widths, shifts and regular flags."""
    if level not in _CUSP_REPS:
        raise ValueError("unsupported level %d (use 4, 8, 12 or 16)" % level)
    out = []
    for a, c in _CUSP_REPS[level]:
        if c == 0:
            width = 1
            shift = Fraction(0)
        else:
            width = level // math.gcd(c * c, level)
            shift = _theta_shift(c, level)
        if shift.denominator not in (1, 2, 4):
            raise ArithmeticError("unexpected cusp shift %s" % shift)
        out.append(CuspInfo(a, c, width, shift == 0, shift))
    n_reg = sum(1 for t in out if t.regular)
    if n_reg != _REGULAR_COUNT[level]:
        raise ArithmeticError(
            "regular cusp count %d at level %d contradicts the expected %d"
            % (n_reg, level, _REGULAR_COUNT[level])
        )
    if sum(t.width for t in out) != group_index(level):
        raise ArithmeticError("cusp widths do not sum to the group index")
    return out


# ----------------------------------------------------------------------
# Dedekind sums and numeric eta

def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h, k) = sum_{r=1}^{k-1} (r/k)((h r / k)), exact."""
    if k <= 0:
        raise ValueError("k must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError("gcd(h, k) must be 1")
    # O(log k) via reciprocity would be nicer; O(k) is fine at desk scale
    acc = Fraction(0)
    for r in range(1, k):
        x = Fraction(h * r, k)
        saw = x - math.floor(x) - Fraction(1, 2) if x.denominator != 1 else Fraction(0)
        acc += Fraction(r, k) * saw
    return acc


def _reduce_to_fundamental(tau: complex, cap: int = 64):
    """Return (tau_red, (a, b, c, d)) with tau_red = M tau in the usual
    fundamental domain."""
    a, b, c, d = 1, 0, 0, 1
    t = tau
    for _ in range(cap):
        n = round(t.real)
        if n:
            t = t - n
            a, b = a - n * c, b - n * d
        if abs(t) < 1 - 1e-15:
            t = -1 / t
            a, b, c, d = -c, -d, a, b
        else:
            return t, (a, b, c, d)
    raise ArithmeticError("fundamental-domain reduction did not converge")


def _eta_fundamental(tau: complex, tol: float) -> complex:
    q = cmath.exp(2j * math.pi * tau)
    total = 0 + 0j
    k = 0
    term = 1 + 0j
    # sum_{k in Z} (-1)^k q^(k(3k-1)/2), folded
    total += 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        s = -1 if k % 2 else 1
        term = s * (q**e1 + q**e2)
        total += term
        if abs(q) ** e1 < tol * 1e-3:
            break
        k += 1
        if k > 400:
            raise ArithmeticError("eta series did not converge")
    return cmath.exp(2j * math.pi * tau / 24) * total


def eta_eval(tau: complex, tol: float = 1e-12) -> complex:
    """Numeric eta(tau) for Im(tau) > 0, to absolute accuracy near tol."""
    if tau.imag <= 0:
        raise ValueError("need Im(tau) > 0")
    t_red, (a, b, c, d) = _reduce_to_fundamental(tau)
    val_red = _eta_fundamental(t_red, tol)
    # eta(M tau) = eps(M) (-i(c tau + d))^(1/2) eta(tau)
    if c == 0:
        # M = +-(1, n; 0, 1): eta(tau + n) = exp(i pi n / 12) eta(tau)
        n = b * d  # with a = d = +-1, the shift is b/d = b*d
        return val_red * cmath.exp(-1j * math.pi * n / 12)
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    eps = cmath.exp(1j * math.pi * (Fraction(a + d, 12 * c) - dedekind_sum(d, c)))
    root = cmath.sqrt(-1j * (c * tau + d))
    return val_red / (eps * root)


def eval_truncated(series: QSeries, tau: complex) -> complex:
    """Evaluate a truncated q-expansion at tau (caller controls the tail)."""
    q = cmath.exp(2j * math.pi * tau / series.grain)
    out = 0 + 0j
    for k, v in series.items():
        out += complex(Fraction(v) if not isinstance(v, complex) else v) * q**k
    return out


# ----------------------------------------------------------------------
# numeric constant terms at cusps

def scaling_matrix(cusp: CuspInfo) -> tuple[int, int, int, int]:
    """A fixed integral matrix sending infinity to the cusp."""
    if cusp.is_infinity:
        return (1, 0, 0, 1)
    a, c = cusp.a, cusp.c
    g, x, _y = ext_gcd(a, c)
    if g != 1:
        raise ValueError("cusp %d/%d not reduced" % (a, c))
    d = x % c if c > 1 else 0
    b = (a * d - 1) // c
    return (a, b, c, d)


def cusp_constant(form, cusp: CuspInfo, weight2: int, tol: float = 1e-9,
                  samples: int = 8) -> complex:
    """Numeric constant term of the expansion of `form` at a regular cusp.

    form must expose eval(tau); weight2 is twice the (half-integral) weight.
    The slash factor uses the principal branch of (c z + d)^(-weight2/2);
    the convention is pinned by theta at the cusp 0 giving (1-i)/2.
    Averaging over one full width of horizontal sample points kills the
    non-constant Fourier modes to well below tol.
    """
    if cusp.is_infinity:
        raise ValueError("use the exact q-expansion at infinity")
    if not cusp.regular:
        raise ValueError("constant term requested at an irregular cusp")
    a, b, c, d = scaling_matrix(cusp)
    h = cusp.width

    def averaged(y: float) -> complex:
        acc = 0 + 0j
        for k in range(samples):
            z = complex(k * h / samples, y)
            w = (a * z + b) / (c * z + d)
            fac = cmath.exp(-0.5 * weight2 * cmath.log(c * z + d))
            acc += fac * form.eval(w)
        return acc / samples

    y1 = max(2.0, 0.75 * h)
    y2 = y1 + 0.5 * h + 1.0
    v1 = averaged(y1)
    v2 = averaged(y2)
    if abs(v1 - v2) > max(tol, 1e-13):
        raise ArithmeticError(
            "cusp constant did not stabilize at %s (delta %.3g); slow decay "
            "suggests a pole or an irregular expansion" % (cusp.label(), abs(v1 - v2))
        )
    return v2
