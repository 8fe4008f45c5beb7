"""Linear relations among Fourier coefficients from the residue theorem.

For g of weight r+1/2 and the weight-2 form R with its only zero at
infinity, g/R^e is weakly holomorphic with pole order at most e*omega at
infinity; pairing its principal part and regular-cusp constants against a
form f of the complementary weight lambda+1/2 (r = 2e - lambda + 1) gives
a linear relation on the coefficients a_f(1), ..., a_f(e*omega).

The principal part is always taken against R^e; the constants at cusps
other than infinity are numeric, the rest of the pairing is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .eta import cusp_set, cusp_constant
from .series import QSeries, PrecisionError
from .spaces import (
    HalfIntegralForm,
    basis,
    delta_exponent,
    delta_form,
    dimension,
    hauptmodul_expr,
    omega,
    r_quotient,
)

__all__ = [
    "RelationVector",
    "principal_part",
    "phi_map",
    "check_relation",
    "sturm_bound",
    "mod_p_relation_basis",
    "prescribe_principal_part",
    "rational_rank",
]


@dataclass
class RelationVector:
    """Pairing data of one dual-basis form g: widths times regular-cusp
    constants of g/R^e (infinity first), plus the exact principal part."""

    level: int
    lam: int
    e: int
    cusp_part: list
    coeff_part: list

    def to_json_obj(self):
        return {
            "level": self.level,
            "lambda": self.lam,
            "e": self.e,
            "cusp_part": [[z.real, z.imag] for z in map(complex, self.cusp_part)],
            "coeff_part": ["%d/%d" % (Fraction(c).numerator, Fraction(c).denominator)
                           for c in self.coeff_part],
            "divisor": "R^e",
        }


def _quotient_series(g: HalfIntegralForm, e: int) -> QSeries:
    """Exact expansion of g / R^e as far as g's precision allows."""
    om = omega(g.level)
    gq = g.series.normalize_grain()
    if gq.grain != 1:
        raise ValueError("integer exponent grid expected")
    q_prec = gq.prec
    need = 2 * e * om + 2
    if q_prec < need:
        raise PrecisionError(
            "g needs at least %d provable terms for e=%d (has %d)"
            % (need, e, q_prec)
        )
    R = r_quotient(g.level).expansion_to(q_prec).normalize_grain()
    r_inv_e = (R**e).invert()
    return gq * r_inv_e


def principal_part(g: HalfIntegralForm, e: int) -> list[Fraction]:
    """Coefficients b(nu) of q^(-nu), nu = 1..e*omega, of g/R^e."""
    om = omega(g.level)
    x = _quotient_series(g, e)
    return [Fraction(x.coeff(-nu)) for nu in range(1, e * om + 1)]


def phi_map(g: HalfIntegralForm, e: int, lam: int, tol: float = 1e-9) -> RelationVector:
    """The relation vector of g: (h_t a^t(0) at regular cusps, b(1..e*omega)).

    Requires weight(g) = r + 1/2 with r = 2e - lam + 1 >= 0.
    """
    r = 2 * e - lam + 1
    if r < 0:
        raise ValueError("need r = 2e - lambda + 1 >= 0")
    if g.lam != r:
        raise ValueError("g has weight %d/2, expected r = %d" % (g.weight_num, r))
    x = _quotient_series(g, e)
    om = omega(g.level)
    coeffs = [Fraction(x.coeff(-nu)) for nu in range(1, e * om + 1)]
    cusps = [t for t in cusp_set(g.level) if t.regular]
    cusp_vals = []
    weight2 = g.weight_num - 4 * e
    for t in cusps:
        if t.is_infinity:
            cusp_vals.append(complex(Fraction(x.coeff(0))))
            continue
        if g.eta_expr is None:
            raise ValueError(
                "no exact expression for g; cusp constants need one"
            )
        expr = g.eta_expr * (r_quotient(g.level) ** (-e))
        cusp_vals.append(t.width * cusp_constant(expr, t, weight2, tol))
    return RelationVector(g.level, lam, e, cusp_vals, coeffs)


def check_relation(v: RelationVector, f: HalfIntegralForm, cusp_constants_of_f,
                   tol: float | None = None):
    """Left side of the residue relation: sum of cusp products plus the
    principal-part pairing.

    cusp_constants_of_f lists a^t_f(0) in the cusp order of the vector
    (infinity first); pass None or all-zero for a certified cusp form, in
    which case the residual is an exact rational.
    """
    n = len(v.coeff_part)
    fq = f.series.normalize_grain()
    if fq.prec < n + 1:
        raise PrecisionError("f needs %d provable coefficients" % (n + 1))
    pairing = sum((c * Fraction(fq.coeff(nu)) for nu, c in
                   enumerate(v.coeff_part, start=1)), Fraction(0))
    if cusp_constants_of_f is None:
        return pairing
    consts = list(cusp_constants_of_f)
    if all(z == 0 for z in consts):
        return pairing
    if len(consts) != len(v.cusp_part):
        raise ValueError("expected %d cusp constants" % len(v.cusp_part))
    total = complex(pairing)
    for z, w in zip(v.cusp_part, consts):
        total += complex(z) * complex(w)
    return total


def sturm_bound(level: int, weight) -> int:
    """ceil((weight/12) * index of Gamma0(level))."""
    from .eta import group_index

    w = Fraction(weight)
    if w < 0:
        raise ValueError("weight must be nonnegative")
    b = w * group_index(level) / 12
    return int(math.ceil(b))


def mod_p_relation_basis(level: int, lam: int, e: int, p: int) -> list[list[int]]:
    """Principal-part vectors of the dual basis reduced mod p; their rank
    over F_p must equal the dual dimension.

    Allowed p: odd primes, p >= 5 when the level is 12 (the generators have
    a denominator 6 there).
    """
    from .arith import is_prime

    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if level == 12 and p < 5:
        raise ValueError("level 12 requires p >= 5")
    r = 2 * e - lam + 1
    if r < 0:
        raise ValueError("need r = 2e - lambda + 1 >= 0")
    om = omega(level)
    n = e * om
    gs = basis(level, r, 2 * n + 6)
    rows = []
    for g in gs:
        b = principal_part(g, e)
        row = []
        for c in b:
            if c.denominator % p == 0:
                raise ArithmeticError(
                    "non-%d-integral principal part in the dual basis" % p
                )
            row.append(c.numerator * pow(c.denominator, -1, p) % p)
        rows.append(row)
    rank = _rank_mod_p(rows, p)
    expected = dimension(level, Fraction(2 * r + 1, 2))
    if rank != expected:
        raise ArithmeticError(
            "mod-%d rank %d disagrees with the dimension %d" % (p, rank, expected)
        )
    return rows


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        mat[rank] = [x * inv % p for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] % p:
                c = mat[i][col]
                mat[i] = [(a - c * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def rational_rank(rows: list[list[Fraction]]) -> int:
    mat = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                c = mat[i][col]
                mat[i] = [a - c * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def prescribe_principal_part(level: int, lam: int, pp: dict, prec: int) -> HalfIntegralForm:
    """A weakly holomorphic form of weight lam+1/2, pole only at infinity,
    with the given principal part {nu: coefficient}; the holomorphic head
    q^0..q^delta is normalized to zero (empty pp returns the first basis
    element instead)."""
    pp = {int(k): Fraction(v) for k, v in pp.items() if v}
    bs = basis(level, lam, max(prec, delta_exponent(level, lam) + 2))
    if not pp:
        return bs[0]
    n = max(pp)
    d = delta_exponent(level, lam)
    dform = delta_form(level, lam, prec + d + n + 2)
    jexpr = hauptmodul_expr(level)
    # family with leading exponents d, d-1, ..., -n
    family = []
    expr = dform.eta_expr
    series = dform.series
    for i in range(d + n + 1):
        family.append((series, expr))
        if i < d + n:
            expr = expr * jexpr
            series = expr.expansion_to(prec)
    acc_s = None
    acc_e = None
    for nu in range(n, 0, -1):
        want = pp.get(nu, Fraction(0))
        have = Fraction(acc_s.coeff_q(-nu)) if acc_s is not None else Fraction(0)
        c = want - have
        if not c:
            continue
        s, ex = family[d + nu]
        lead = s.valuation()
        if lead != -nu:
            raise ArithmeticError("family member has unexpected pole order")
        c = c / Fraction(s.coeff(-nu))
        acc_s = s * c if acc_s is None else acc_s + s * c
        acc_e = ex.scaled(c) if acc_e is None else acc_e + ex.scaled(c)
    if acc_s is None:
        raise ArithmeticError("prescribed part unreachable")
    # clear the holomorphic head
    for k in range(0, d + 1):
        c = Fraction(acc_s.coeff_q(k))
        if c:
            acc_s = acc_s - bs[k].series * c
            if bs[k].eta_expr is not None and acc_e is not None:
                acc_e = acc_e - bs[k].eta_expr.scaled(c)
            else:
                acc_e = None
    for nu in range(1, n + 1):
        if Fraction(acc_s.coeff_q(-nu)) != pp.get(nu, Fraction(0)):
            raise ArithmeticError("principal part verification failed")
    return HalfIntegralForm(level, 2 * lam + 1, acc_s.truncate(prec), acc_e)
