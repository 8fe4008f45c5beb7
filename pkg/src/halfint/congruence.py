"""Empirical verifiers for coefficient congruences of half-integral weight
forms under iterated U_p, and the weak-limit value at prime-power indices.

The theorems being checked are existence statements (some b works, with no
effective bound), so every verifier searches b up to a cap and reports
pass, fail or inconclusive; an exhausted cap is never reported as a pass.

The weak-limit engine works at level 4 with exact constants in Q(i): the
relevant quotient X = (maximal-vanishing form)/R has the simple pole
q^-1 + (14-4a) + O(q) at infinity and the cusp-0 constant
-2^6 ((1-i)/2)^(7-2a), a in {2,3}; both are regression-tested against the
numeric cusp engine.  The weight-reduction pair (a, m) is taken with
a in {2,3}, which is what makes the machinery non-degenerate; the literal
floor-definition pair is exposed separately as m_alpha.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import GaussRat, ZiModP, is_prime
from .series import NonIntegralCoefficient, PrecisionError, QSeries
from .spaces import HalfIntegralForm, delta_form, r_quotient

__all__ = [
    "CongruenceReport",
    "HypothesisError",
    "m_alpha",
    "normalized_alpha_m",
    "weight_witness",
    "verify_up_vanishing",
    "weak_limit_check",
    "sums_of_squares_residue",
    "sums_of_squares_target",
    "sums_of_squares_residue_literal",
    "cusp0_constant_of_quotient",
]


class HypothesisError(ValueError):
    """A verifier's weight/prime hypothesis is violated; no search is run."""


@dataclass
class CongruenceReport:
    theorem: str
    p: int
    j: int
    lam: int | None
    level: int | None
    b_min: int
    b_max: int
    n_max: int | None
    found_b: int | None
    verdict: str  # pass | fail | inconclusive
    witness: int | None = None
    note: str | None = None

    def to_json_obj(self):
        obj = {
            "theorem": self.theorem,
            "p": self.p,
            "j": self.j,
            "lambda": self.lam,
            "level": self.level,
            "b_min": self.b_min,
            "b_max": self.b_max,
            "n_max": self.n_max,
            "found_b": self.found_b,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            obj["witness"] = self.witness
        if self.note is not None:
            obj["note"] = self.note
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


# ----------------------------------------------------------------------
# weight-reduction parameters

def m_alpha(p: int, n: int) -> tuple[int, int]:
    """(m, alpha) by the literal floor definitions:
    m = parity of floor(2n/(p-1)), alpha = n - ((p-1)/2) floor(2n/(p-1))."""
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if n < 0:
        raise ValueError("n must be nonnegative")
    t = (2 * n) // (p - 1)
    return t % 2, n - (p - 1) // 2 * t


def normalized_alpha_m(p: int, lam: int) -> tuple[int, int]:
    """The representative (alpha, m) with alpha in {2, 3}, m in {0, 1} and
    (lam + 1/2) p^m = alpha + 1/2 mod (p-1); this is the pair the limit
    machinery needs (alpha >= 2 keeps the pole of the pairing quotient).

    For p >= 11 it agrees with m_alpha whenever the weight hypothesis
    lam = 2 or 3 mod (p-1)/2 holds; for p <= 7 the literal alpha can fall
    outside {2, 3} and is re-normalized here.
    """
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    h = (p - 1) // 2
    best = None
    for a in (2, 3):
        if (a - lam) % h:
            continue
        for m in (0, 1):
            if (lam + m * h - a) % (p - 1) == 0:
                if best is None or m < best[1]:
                    best = (a, m)
    if best is None:
        raise HypothesisError(
            "lambda = %d is not 2 or 3 mod (p-1)/2 = %d" % (lam, h)
        )
    return best


def weight_witness(p: int, lam: int, b_cap: int = 40):
    """Smallest b with a nonnegative integer ell solving
    ((3-2a)/2) p^(2b) + (lam+1/2) p^m + ell (p-1) = 2, with the literal
    (m, alpha); None when no solution exists below the cap."""
    m, a = m_alpha(p, lam)
    num = (2 * lam + 1) * p**m - (2 * a + 1)
    if num % (2 * (p - 1)):
        raise ArithmeticError("weight decomposition identity failed")
    nu = num // (2 * (p - 1))
    for b in range(1, b_cap + 1):
        ell2 = (2 * a - 3) * (p ** (2 * b) - 1) // (p - 1) - 2 * nu
        if ell2 < 0:
            if a < 2:
                return None  # decreasing in b, hopeless
            continue
        if ell2 % 2 == 0:
            ell = ell2 // 2
            lhs = (
                Fraction(3 - 2 * a, 2) * p ** (2 * b)
                + Fraction(2 * lam + 1, 2) * p**m
                + ell * (p - 1)
            )
            if lhs != 2:
                raise ArithmeticError("witness identity check failed")
            return b, ell
    return None


# ----------------------------------------------------------------------
# iterated U_p vanishing

def verify_up_vanishing(f: HalfIntegralForm, p: int, j: int, b_max: int,
                        n_max: int | None = None,
                        cusp_vanishing_certified: bool = False) -> CongruenceReport:
    """Search for the smallest b <= b_max with a_f(n p^b) = 0 mod p^j for
    all 1 <= n <= n_max.

    For p = 2 the form must have zero constant terms at every cusp (an
    exact zero at infinity is checked here; vanishing elsewhere must be
    certified by the caller, e.g. through the cusp subspace).  For odd p
    the weight must satisfy lam = 2 or 2 + [1/N] mod (p-1)/2.
    """
    if not is_prime(p):
        raise ValueError("p must be prime")
    if n_max is None:
        from .relations import sturm_bound

        n_max = max(50, sturm_bound(f.level, Fraction(f.weight_num, 2)))
    lam = f.lam
    N = f.level // 4
    if p == 2:
        if Fraction(f.series.coeff_q(0)) != 0:
            raise HypothesisError("p = 2 needs a vanishing constant term")
        if not cusp_vanishing_certified:
            raise HypothesisError(
                "p = 2 needs certified vanishing constant terms at all cusps"
            )
    else:
        h = (p - 1) // 2
        allowed = {2 % h if h else 0, (2 + (1 if N == 1 else 0)) % h if h else 0}
        if h and lam % h not in allowed:
            raise HypothesisError(
                "lambda = %d is not 2 or %d mod (p-1)/2 = %d"
                % (lam, 2 + (1 if N == 1 else 0), h)
            )
    need = n_max * p**b_max + 1
    fq = f.series.normalize_grain()
    if fq.prec < need:
        raise PrecisionError(
            "need %d coefficients for b_max = %d, have %d" % (need, b_max, fq.prec)
        )
    fm = fq.reduce_mod(p, j)
    witness = None
    for b in range(1, b_max + 1):
        pb = p**b
        bad = None
        for n in range(1, n_max + 1):
            if fm.coeff(n * pb) != 0:
                bad = n * pb
                break
        if bad is None:
            return CongruenceReport(
                "up_vanishing", p, j, lam, f.level, 1, b_max, n_max, b, "pass"
            )
        witness = bad
    return CongruenceReport(
        "up_vanishing", p, j, lam, f.level, 1, b_max, n_max, None,
        "inconclusive", witness=witness,
    )


# ----------------------------------------------------------------------
# weak-limit values at level 4

# cusp-0 constants of X = delta_form(4, 3-alpha)/R_4, pinned exactly and
# regression-tested against the numeric cusp engine
_X_CUSP0 = {
    2: GaussRat(16, 16),    # -2^6 ((1-i)/2)^3
    3: GaussRat(-32, 32),   # -2^6 ((1-i)/2)^1
}


def cusp0_constant_of_quotient(alpha: int) -> GaussRat:
    return _X_CUSP0[alpha]


def _x_constants(alpha: int) -> tuple[int, GaussRat]:
    """(a_X(0), cusp-0 constant) for X = delta(4, 3-alpha)/R_4."""
    d = delta_form(4, 3 - alpha, 10)
    R = r_quotient(4).expansion_to(10).normalize_grain()
    x = d.series * R.invert()
    if x.leading() != (-1, 1):
        raise ArithmeticError("pairing quotient should have a simple pole")
    a0 = int(x.coeff(0))
    if a0 != 14 - 4 * alpha:
        raise ArithmeticError("constant term of the pairing quotient moved")
    return a0, _X_CUSP0[alpha]


def sums_of_squares_target(p: int, lam: int) -> tuple[int, int, int]:
    """(residue, m, alpha) for r_(2 lam + 1)(p^(2b - m)) mod p, from the
    exact Q(i) limit machinery specialized to the theta power."""
    alpha, m = normalized_alpha_m(p, lam)
    a_x0, a0x = _x_constants(alpha)
    theta0 = GaussRat(Fraction(1, 2), Fraction(-1, 2)) ** (2 * lam + 1)
    x = ZiModP.from_gauss(a0x, p)
    y = ZiModP.from_gauss(theta0, p).frobenius(m)
    val = ZiModP(p, 0) - ZiModP(p, a_x0) - ZiModP(p, 4) * x * y
    if not val.is_rational():
        raise ArithmeticError("limit value should be rational mod p")
    return val.a, m, alpha


def sums_of_squares_residue(p: int, lam: int) -> int:
    return sums_of_squares_target(p, lam)[0]


def sums_of_squares_residue_literal(p: int, lam: int) -> int:
    """The closed form -(14-4a) + 16 (-1/p)^([lam/(p-1)] + a m) with the
    literal floor-definition (m, a); agrees with sums_of_squares_residue
    whenever the literal a lands in {2, 3}, and is kept for comparison."""
    from .arith import legendre_euler

    m, a = m_alpha(p, lam)
    e = lam // (p - 1) + a * m
    sgn = legendre_euler(-1, p) ** e
    return (-(14 - 4 * a) + 16 * sgn) % p


def weak_limit_check(f, p: int, b_range, lam: int | None = None,
                     cusp0_constant: GaussRat | None = None,
                     target_residue: int | None = None,
                     theorem: str = "weak_limit") -> CongruenceReport:
    """Check a_f(p^(2b - m)) mod p against the limit value for each b.

    Level-4 machinery: the residual
        a_f(p^(2b-m)) + (14-4a) a_f(0) + 4 X0 c0^(p^m)
    must vanish in Z[i]/(p), where X0 is the exact cusp-0 constant of the
    pairing quotient and c0 = a_f^0(0) is supplied by the caller (exact,
    in Q(i)).  Alternatively a literal target residue may be supplied (used
    for series whose weight sits outside the table, where the published
    example is the contract).

    Passes when every b past some b0 in the range agrees; the report's
    found_b is that b0.
    """
    series = f.series if isinstance(f, HalfIntegralForm) else f
    level = f.level if isinstance(f, HalfIntegralForm) else 4
    if lam is None:
        lam = f.lam if isinstance(f, HalfIntegralForm) else None
    bs = sorted(b_range)
    if not bs:
        raise ValueError("empty b range")
    if target_residue is not None:
        m = 0
        expected = target_residue % p
        results = []
        sq = series.reduce_mod(p, 1) if series.modulus is None else series
        for b in bs:
            results.append(sq.coeff(p ** (2 * b - m)) == expected)
    else:
        if p < 3:
            raise HypothesisError("weak limit check needs an odd prime")
        if level != 4:
            raise ValueError(
                "exact limit constants are pinned at level 4 only; pass a "
                "target residue for other levels"
            )
        alpha, m = normalized_alpha_m(p, lam)
        if cusp0_constant is None:
            raise ValueError("supply the exact cusp-0 constant of f")
        a_x0, a0x = _x_constants(alpha)
        x = ZiModP.from_gauss(a0x, p)
        y = ZiModP.from_gauss(cusp0_constant, p).frobenius(m)
        tail = ZiModP(p, 4) * x * y
        sq = series.reduce_mod(p, 1) if series.modulus is None else series
        a_f0 = int(Fraction(series.coeff_q(0)).numerator
                   * pow(Fraction(series.coeff_q(0)).denominator, -1, p)) % p \
            if series.modulus is None else int(series.coeff(0))
        results = []
        for b in bs:
            lhs = ZiModP(p, int(sq.coeff(p ** (2 * b - m)))) \
                + ZiModP(p, a_x0 * a_f0) + tail
            results.append(lhs.is_zero())
    # find smallest b0 with everything after it passing
    found = None
    for i, b in enumerate(bs):
        if all(results[i:]):
            found = b
            break
    if found is not None and results[-1]:
        verdict = "pass"
    else:
        verdict = "fail"
        found = None
    witness = None
    if verdict == "fail":
        witness = p ** (2 * bs[-1] - (m if target_residue is None else 0))
    return CongruenceReport(
        theorem, p, 1, lam, level, bs[0], bs[-1], None, found, verdict,
        witness=witness,
    )
