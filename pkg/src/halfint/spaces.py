"""Spaces of half-integral weight forms on Gamma0(4N), N in {1,2,3,4}:
dimension table, maximal-vanishing generators, hauptmoduls, echelon bases
and the cusp subspace, plus the classical level-1 series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import bernoulli
from .eta import (
    EtaCombination,
    EtaQuotient,
    TernaryThetaDiff,
    cusp_set,
    ligozat_order,
    theta_eta_quotient,
    theta_series,
)
from .series import QSeries

__all__ = [
    "HalfIntegralForm",
    "FormExpr",
    "dimension",
    "delta_exponent",
    "omega",
    "r_quotient",
    "delta_form",
    "hauptmodul",
    "hauptmodul_expr",
    "basis",
    "cusp_subspace",
    "eisenstein",
    "discriminant",
    "j_invariant",
    "gp_form",
    "sigma_series",
]

_LEVELS = (4, 8, 12, 16)


# ----------------------------------------------------------------------
# form expressions: rational combinations of products of expandable atoms

class FormExpr:
    """Sum of coeff * eta_quotient * (extra atoms); closed under products.

    Extra atoms (the ternary theta difference) are opaque objects exposing
    series(prec, modulus) and eval(tau).
    """

    def __init__(self, terms):
        merged = {}
        for c, eq, extras in terms:
            c = Fraction(c)
            if not c:
                continue
            key = (eq.factors, tuple(id(x) for x in extras))
            if key in merged:
                merged[key][0] += c
            else:
                merged[key] = [c, eq, tuple(extras)]
        self.terms = tuple((c, eq, ex) for c, eq, ex in merged.values() if c)

    @classmethod
    def from_eta(cls, eq: EtaQuotient, coeff=1) -> "FormExpr":
        return cls([(Fraction(coeff), eq, ())])

    @classmethod
    def from_atom(cls, atom, coeff=1) -> "FormExpr":
        return cls([(Fraction(coeff), EtaQuotient(()), (atom,))])

    @classmethod
    def from_combination(cls, comb: EtaCombination) -> "FormExpr":
        return cls([(c, eq, ()) for c, eq in comb.terms])

    def is_eta_only(self) -> bool:
        return all(not ex for _, _, ex in self.terms)

    def as_eta_combination(self) -> EtaCombination:
        if not self.is_eta_only():
            raise ValueError("expression contains non-eta atoms")
        return EtaCombination([(c, eq) for c, eq, _ in self.terms])

    def __add__(self, other: "FormExpr") -> "FormExpr":
        return FormExpr(list(self.terms) + list(other.terms))

    def __sub__(self, other: "FormExpr") -> "FormExpr":
        return self + other.scaled(-1)

    def scaled(self, c) -> "FormExpr":
        return FormExpr([(Fraction(c) * c0, eq, ex) for c0, eq, ex in self.terms])

    def __mul__(self, other):
        if isinstance(other, EtaQuotient):
            return FormExpr([(c, eq * other, ex) for c, eq, ex in self.terms])
        if isinstance(other, FormExpr):
            out = []
            for c1, e1, x1 in self.terms:
                for c2, e2, x2 in other.terms:
                    out.append((c1 * c2, e1 * e2, x1 + x2))
            return FormExpr(out)
        return self.scaled(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "FormExpr":
        if n < 0:
            raise ValueError("negative powers of combinations")
        out = FormExpr.from_eta(EtaQuotient(()))
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def expansion_to(self, q_prec: int, modulus=None) -> QSeries:
        out = None
        for c, eq, extras in self.terms:
            s = eq.expansion_to(q_prec, modulus=modulus)
            for atom in extras:
                s = s * atom.series(q_prec, modulus=modulus)
                s = s.truncate(q_prec * s.grain)
            if modulus is not None:
                cm = c.numerator * pow(c.denominator, -1, modulus) % modulus
                s = s * cm
            else:
                s = s * c
            out = s if out is None else out + s
        if out is None:
            return QSeries.zero(q_prec, modulus=modulus)
        return out

    def eval(self, tau: complex, tol: float = 1e-12) -> complex:
        total = 0 + 0j
        for c, eq, extras in self.terms:
            v = complex(c) * eq.eval(tau, tol)
            for atom in extras:
                v *= atom.eval(tau, tol)
            total += v
        return total


# ----------------------------------------------------------------------
# the main container

@dataclass
class HalfIntegralForm:
    """A form of weight weight_num/2 on Gamma0(level), as a q-expansion at
    infinity plus (when available) an exact expression certificate."""

    level: int
    weight_num: int  # odd: 2*lambda + 1
    series: QSeries
    eta_expr: FormExpr | None = None

    @property
    def lam(self) -> int:
        return (self.weight_num - 1) // 2

    @property
    def weight2(self) -> int:
        return self.weight_num

    def coeff(self, n: int):
        return self.series.coeff_q(n)

    def eval(self, tau: complex, tol: float = 1e-12) -> complex:
        if self.eta_expr is None:
            raise ValueError("no exact expression attached; numeric evaluation "
                             "is only supported through one")
        return self.eta_expr.eval(tau, tol)

    def verify_expr(self, q_prec: int | None = None) -> bool:
        """Re-expand the attached expression and compare with the series."""
        if self.eta_expr is None:
            return True
        if q_prec is None:
            q_prec = self.series.prec // self.series.grain
        again = self.eta_expr.expansion_to(q_prec, modulus=self.series.modulus)
        return again.same_on_common_range(self.series.truncate(q_prec * self.series.grain))

    def to_json_obj(self):
        obj = {
            "level": self.level,
            "weight_num": self.weight_num,
            "series": self.series.to_json_obj(),
        }
        return obj


# ----------------------------------------------------------------------
# dimension table

def dimension(level: int, weight) -> int:
    """Dimension of M_k(Gamma0(level)) for the supported levels; k may be a
    half-integer (weight = lambda + 1/2) or a nonnegative even integer."""
    if level not in _LEVELS:
        raise ValueError("unsupported level %d" % level)
    N = level // 4
    w = Fraction(weight)
    if w.denominator == 2:
        lam = int(w - Fraction(1, 2))
        if lam < 0:
            raise ValueError("negative lambda not in the dimension table")
        if lam % 2 == 0:
            n = lam // 2
            col = {1: n + 1, 2: 2 * n + 1, 3: 4 * n + 1, 4: 4 * n + 2}
        else:
            n = (lam - 1) // 2
            col = {1: n + 1, 2: 2 * n + 2, 3: 4 * n + 3, 4: 4 * n + 4}
        return col[N]
    if w.denominator == 1 and w >= 0 and w % 2 == 0:
        n = int(w) // 2
        col = {1: n + 1, 2: 2 * n + 1, 3: 4 * n + 1, 4: 4 * n + 1}
        return col[N]
    raise ValueError("weight %s not covered by the dimension table" % (weight,))


def delta_exponent(level: int, lam: int) -> int:
    """Order of the maximal-vanishing form: dim - 1."""
    return dimension(level, Fraction(2 * lam + 1, 2)) - 1


# ----------------------------------------------------------------------
# distinguished weight-2 quotients and hauptmoduls

_R_FACTORS = {
    4: ((4, 8), (2, -4)),
    8: ((8, 8), (4, -4)),
    12: ((12, 12), (2, 2), (6, -6), (4, -4)),
    16: ((16, 8), (8, -4)),
}


def r_quotient(level: int) -> EtaQuotient:
    """The weight-2 form R with its only zero at infinity."""
    if level not in _R_FACTORS:
        raise ValueError("unsupported level %d" % level)
    return EtaQuotient(_R_FACTORS[level], level=level)


def omega(level: int) -> int:
    """Order of vanishing of R at infinity."""
    o = ligozat_order(r_quotient(level), 0, level)
    if o.denominator != 1:
        raise ArithmeticError("non-integral order at infinity")
    return int(o)


_J_ETA = {
    4: (((1, 8), (4, -8)), 8),
    8: (((4, 12), (2, -4), (8, -8)), 0),
    12: (((4, 4), (6, 2), (2, -2), (12, -4)), 0),
    16: (((1, 2), (8, 1), (2, -1), (16, -2)), 2),
}


def hauptmodul_expr(level: int) -> FormExpr:
    factors, const = _J_ETA[level]
    expr = FormExpr.from_eta(EtaQuotient(factors, level=level))
    if const:
        expr = expr + FormExpr.from_eta(EtaQuotient(()), const)
    return expr


def hauptmodul(level: int, prec: int) -> QSeries:
    """q^(-1) + O(q) generator of the genus-zero function field, with
    integer coefficients."""
    if level not in _LEVELS:
        raise ValueError("unsupported level %d" % level)
    s = hauptmodul_expr(level).expansion_to(prec).normalize_grain()
    if s.leading() != (-1, 1) or s.coeff(0) != 0:
        raise ArithmeticError("hauptmodul normalization failed at level %d" % level)
    return s


def _theta_expr(scale: int = 1) -> FormExpr:
    return FormExpr.from_eta(theta_eta_quotient(scale))


def _delta_seed_expr(level: int, j: int) -> FormExpr:
    """The weight j+1/2 maximal-vanishing generator, j in {0, 1}."""
    th = _theta_expr(1)
    if j == 0:
        if level == 16:
            return (th - _theta_expr(4)).scaled(Fraction(1, 2))
        return th
    if level == 4:
        return th**3
    if level == 8:
        return (th**3 - th * _theta_expr(2) ** 2).scaled(Fraction(1, 4))
    if level == 12:
        return FormExpr.from_atom(TernaryThetaDiff())
    if level == 16:
        d0 = (th - _theta_expr(4)).scaled(Fraction(1, 2))
        return d0**3
    raise ValueError("unsupported level %d" % level)


def delta_form(level: int, lam: int, prec: int) -> HalfIntegralForm:
    """The form q^delta + O(q^(delta+1)) of weight lam + 1/2 with maximal
    vanishing at infinity, built from the odd/even seed times powers of R."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    j = lam % 2
    expr = _delta_seed_expr(level, j)
    if lam > j:
        expr = expr * (r_quotient(level) ** ((lam - j) // 2))
    series = expr.expansion_to(prec).normalize_grain()
    d = delta_exponent(level, lam)
    if series.grain != 1:
        raise ArithmeticError("fractional exponents in a level-%d form" % level)
    if prec > d and series.leading() != (d, 1):
        raise ArithmeticError(
            "maximal-vanishing form at level %d, lambda %d should lead with q^%d"
            % (level, lam, d)
        )
    return HalfIntegralForm(level, 2 * lam + 1, series, expr)


# ----------------------------------------------------------------------
# bases

def _echelonize(rows: list[tuple[QSeries, FormExpr | None]], top: int):
    """Reduced echelon form by leading exponent: pivot rows get unit leading
    coefficients at distinct exponents <= top, fully back-substituted."""
    pivots: dict[int, tuple[QSeries, FormExpr | None]] = {}
    for s, e in rows:
        lead = s.valuation()
        while lead is not None and lead in pivots:
            ps, pe = pivots[lead]
            c = Fraction(s.coeff(lead))
            s = s - ps * c
            e = None if (e is None or pe is None) else e - pe.scaled(c)
            lead = s.valuation()
        if lead is None or lead > top:
            raise ArithmeticError("echelonization lost a pivot")
        inv = 1 / Fraction(s.coeff(lead))
        s = s * inv
        e = None if e is None else e.scaled(inv)
        pivots[lead] = (s, e)
    norm = [[lead, s, e] for lead, (s, e) in sorted(pivots.items())]
    for a in range(len(norm)):
        for b in range(len(norm)):
            if a == b:
                continue
            lead_b, sb, eb = norm[b][0], norm[b][1], norm[b][2]
            ca = Fraction(norm[a][1].coeff(lead_b)) if lead_b < norm[a][1].prec else 0
            if ca:
                norm[a][1] = norm[a][1] - sb * ca
                if norm[a][2] is not None and eb is not None:
                    norm[a][2] = norm[a][2] - eb.scaled(ca)
                else:
                    norm[a][2] = None
    return [(s, e) for _, s, e in norm]


def basis(level: int, lam: int, prec: int) -> list[HalfIntegralForm]:
    """Echelon basis of M_(lam+1/2)(Gamma0(level)): delta * j^e reduced to
    leading terms q^0, ..., q^delta with unit leading coefficients."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    d = delta_exponent(level, lam)
    prec = max(prec, d + 2)
    dform = delta_form(level, lam, prec + d)
    jexpr = hauptmodul_expr(level)
    rows = []
    expr = dform.eta_expr
    series = dform.series
    for e in range(d + 1):
        rows.append((series.truncate(prec), expr))
        if e < d:
            expr = expr * jexpr
            series = expr.expansion_to(prec)
    red = _echelonize(rows, top=d)
    out = []
    for s, e in red:
        out.append(HalfIntegralForm(level, 2 * lam + 1, s, e))
    if len(out) != dimension(level, Fraction(2 * lam + 1, 2)):
        raise ArithmeticError("basis size disagrees with the dimension table")
    return out


def cusp_subspace(level: int, lam: int, prec: int) -> list[HalfIntegralForm]:
    """Echelon basis of the forms vanishing at every cusp.

    The coefficient tuples (a(1), ..., a(e*omega)) of cusp forms are exactly
    the orthogonal complement of the principal-part vectors of the dual
    weight's basis, so the subspace is cut out by exact rational linear
    algebra; numeric cusp constants re-certify each element in the tests.
    """
    from . import relations

    if lam < 1:
        raise ValueError("cusp subspace needs lambda >= 1")
    N = level // 4
    dim_m = dimension(level, Fraction(2 * lam + 1, 2))
    expected = dim_m - (N + 1 + N // 4)
    if lam == 1 or expected <= 0:
        return []
    om = omega(level)
    d = delta_exponent(level, lam)
    e = max((lam + 1) // 2, -(-d // om))
    r = 2 * e - lam + 1
    n = e * om
    gs = basis(level, r, n + e * om + 4)
    B = [relations.principal_part(g, e) for g in gs]
    null = _rational_nullspace(B, n)
    if len(null) != expected:
        raise ArithmeticError(
            "cusp subspace rank %d disagrees with the stated dimension %d"
            % (len(null), expected)
        )
    full = basis(level, lam, max(prec, n + 2))
    out = []
    for vec in null:
        # assemble the unique form with a(0) = 0 and a(k) = vec[k-1], k <= d
        f_series = None
        f_expr = None
        for k in range(1, d + 1):
            c = vec[k - 1]
            if not c:
                continue
            contrib = full[k].series * c
            f_series = contrib if f_series is None else f_series + contrib
            f_expr = (
                full[k].eta_expr.scaled(c)
                if f_expr is None
                else f_expr + full[k].eta_expr.scaled(c)
            )
        if f_series is None:
            raise ArithmeticError("zero cusp vector")
        for k in range(d + 1, n + 1):
            if f_series.coeff_q(k) != vec[k - 1]:
                raise ArithmeticError(
                    "cusp coefficient tuple not realized by the space"
                )
        out.append(HalfIntegralForm(level, 2 * lam + 1,
                                    f_series.truncate(prec), f_expr))
    rows = [(f.series, f.eta_expr) for f in out]
    red = _echelonize(rows, top=d)
    return [HalfIntegralForm(level, 2 * lam + 1, s, e2) for s, e2 in red]


def _rational_nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Exact nullspace vectors of the row space in Q^n (row-style kernel)."""
    mat = [list(map(Fraction, r)) + [Fraction(0)] * (n - len(r)) for r in rows]
    pivots = []
    ri = 0
    for col in range(n):
        piv = None
        for i in range(ri, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[ri], mat[piv] = mat[piv], mat[ri]
        inv = 1 / mat[ri][col]
        mat[ri] = [x * inv for x in mat[ri]]
        for i in range(len(mat)):
            if i != ri and mat[i][col]:
                c = mat[i][col]
                mat[i] = [a - c * b for a, b in zip(mat[i], mat[ri])]
        pivots.append(col)
        ri += 1
        if ri == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fc]
        out.append(v)
    return out


# ----------------------------------------------------------------------
# classical level-1 series

def sigma_series(k: int, prec: int, modulus=None) -> QSeries:
    """sum_{n>=1} sigma_k(n) q^n by a divisor sieve."""
    if modulus is None:
        vals = [0] * prec
        for dd in range(1, prec):
            pk = dd**k
            for n in range(dd, prec, dd):
                vals[n] += pk
        return QSeries.from_coeff_list(vals, prec)
    arr = np.zeros(prec, dtype=np.int64)
    for dd in range(1, prec):
        arr[dd::dd] += pow(dd, k, modulus)
        if dd % 512 == 0:
            arr %= modulus
    arr %= modulus
    return QSeries.from_coeff_list([int(x) for x in arr], prec, modulus=modulus)


def eisenstein(k: int, prec: int, modulus=None) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_(k-1)(n) q^n, exact rationals."""
    if k < 4 or k % 2:
        raise ValueError("weight must be an even integer >= 4 (got %r)" % (k,))
    c = Fraction(-2 * k) / bernoulli(k)
    if modulus is None:
        s = sigma_series(k - 1, prec) * c
        return s + QSeries.one(prec)
    p = modulus
    if c.denominator % _p_of(modulus) == 0:
        raise ValueError("Eisenstein constant not integral for this modulus")
    cm = c.numerator * pow(c.denominator, -1, p) % p
    s = sigma_series(k - 1, prec, modulus=p) * cm
    return s + QSeries.one(prec, modulus=p)


def _p_of(modulus: int) -> int:
    from .series import _is_prime_power

    return _is_prime_power(modulus)[0]


def discriminant(prec: int) -> QSeries:
    """Delta = eta(z)^24 = q - 24 q^2 + 252 q^3 - ..."""
    return EtaQuotient(((1, 24),)).expansion_to(prec).normalize_grain()


def j_invariant(prec: int) -> QSeries:
    """j = E_4^3 / Delta = q^(-1) + 744 + 196884 q + ..."""
    e4 = eisenstein(4, prec + 2)
    return (e4**3) * discriminant(prec + 2).invert(prec + 1)


def gp_form(p: int, prec: int, modulus=None) -> QSeries:
    """Auxiliary eta quotients vanishing away from infinity: one for each
    prime, expanded at infinity only."""
    from .arith import is_prime

    if not is_prime(p):
        raise ValueError("p must be prime")
    if p == 2:
        eq = EtaQuotient(((8, 48), (16, -24)), level=16)
    elif p == 3:
        eq = EtaQuotient(((1, 27), (9, -3)), level=9)
    else:
        eq = EtaQuotient(((4, p * p), (4 * p * p, -1)), level=4 * p * p)
    return eq.expansion_to(prec, modulus=modulus)
