"""Cyclic shift actions on B[[x]] and confluent Vandermonde identities.

B = L[[t]]/([p]_F(t)/t) carries the order-p automorphism x -> x +_F t.  This
module builds the confluent Vandermonde matrices A(n_1..n_r; m) and checks
their determinant identity, constructs the shift automorphism, decomposes
invariant series as power series in pi(x) = prod_i (x +_F [i]t) with exact
divisibility certificates at every stripping step, and derives the
two-variable consequences: the addition series G(u,v) with
prod(x +_F y +_F [i]t) = G(pi(x), pi(y)), and the twisted group law
F^alpha(u,v) = alpha(F(beta(u), beta(v))) with integral coefficients.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .fgl import Context
from .quotient import FormalP
from .series import (GradedSeries, NotDivisible, SeriesError, Variable,
                     VariableTable)


class FalsificationError(SeriesError):
    """A verified identity failed on concrete data; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# confluent Vandermonde matrices


class ConfluentMatrix:
    """A(n_1,...,n_r; m) with entries binom(v-1, ubar) * t_i^(v-1-ubar).

    Rows are grouped in blocks: block i contributes n_i rows indexed by
    ubar = 0..n_i-1, all in the symbol t_i; columns are v = 1..m.
    """

    __slots__ = ("blocks", "width", "table", "trunc_plus", "rows")

    def __init__(self, blocks, width):
        self.blocks = tuple(int(n) for n in blocks)
        self.width = int(width)
        if not self.blocks or any(n < 1 for n in self.blocks) or self.width < 1:
            raise SeriesError("blocks must be positive and width >= 1")
        n_total = sum(self.blocks)
        variables = [Variable("t%d" % (i + 1), 1)
                     for i in range(len(self.blocks))]
        self.table = VariableTable(variables)
        # Bareiss intermediates are 2x2 determinants of minors, so their
        # degree stays below twice the maximal minor degree.
        self.trunc_plus = 2 * n_total * self.width + 4
        rows = []
        for i, n in enumerate(self.blocks):
            for ubar in range(n):
                row = []
                for v in range(1, self.width + 1):
                    coeff = math.comb(v - 1, ubar)
                    if coeff == 0:
                        row.append(self._zero())
                    else:
                        row.append(GradedSeries.monomial(
                            self.table, self.trunc_plus, 0,
                            {"t%d" % (i + 1): v - 1 - ubar}, coeff=coeff))
                rows.append(tuple(row))
        self.rows = tuple(rows)

    def _zero(self):
        return GradedSeries.zero(self.table, self.trunc_plus, 0)

    def one(self):
        return GradedSeries.one(self.table, self.trunc_plus, 0)

    def minor_rows(self, columns):
        return tuple(tuple(row[j] for j in columns) for row in self.rows)


def build_matrix_A(blocks, width):
    return ConfluentMatrix(blocks, width)


def bareiss_det(rows, one):
    """Fraction-free determinant; every division is exact over the integers."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise SeriesError("determinant of a non-square matrix")
    m = [list(r) for r in rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero:
            for i in range(k + 1, n):
                if not m[i][k].is_zero:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return one - one
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_divide(prev, integral=True)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def vandermonde_product(matrix):
    """prod_{i>j} (t_i - t_j)^(n_i * n_j) over the matrix's symbols."""
    out = matrix.one()
    blocks = matrix.blocks
    for i in range(len(blocks)):
        for j in range(i):
            ti = GradedSeries.monomial(matrix.table, matrix.trunc_plus, 0,
                                       {"t%d" % (i + 1): 1})
            tj = GradedSeries.monomial(matrix.table, matrix.trunc_plus, 0,
                                       {"t%d" % (j + 1): 1})
            out = out * (ti - tj) ** (blocks[i] * blocks[j])
    return out


def compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def check_minor_determinant(blocks, exhaustive_minors=False, width=None):
    """Square determinant identity, optionally all maximal minors.

    Returns a report dict; a failed identity is a falsification and sets
    verdict False with the offending minor as witness.
    """
    blocks = tuple(blocks)
    n_total = sum(blocks)
    square = build_matrix_A(blocks, n_total)
    det = bareiss_det(square.rows, square.one())
    prod = vandermonde_product(square)
    verdict = det == prod
    witness = None
    cases = 1
    if not verdict:
        witness = "det A(%s;%d) != product" % (",".join(map(str, blocks)),
                                               n_total)
    if exhaustive_minors and verdict:
        m = width if width is not None else n_total + 2
        wide = build_matrix_A(blocks, m)
        wprod = vandermonde_product(wide)
        for cols in itertools.combinations(range(m), n_total):
            cases += 1
            sub = bareiss_det(wide.minor_rows(cols), wide.one())
            try:
                sub.exact_divide(wprod, integral=True)
            except NotDivisible:
                verdict = False
                witness = "minor columns %s of A(%s;%d)" % (
                    cols, ",".join(map(str, blocks)), m)
                break
    return {"statement": "minors", "blocks": list(blocks),
            "cases": cases, "verdict": verdict, "witness": witness}


def minors_suite(max_square=6, max_minor=5):
    """The determinant identity for all compositions, then all wide minors."""
    cases = 0
    for n_total in range(1, max_square + 1):
        for blocks in compositions(n_total):
            rep = check_minor_determinant(blocks,
                                          exhaustive_minors=n_total <= max_minor)
            cases += rep["cases"]
            if not rep["verdict"]:
                rep["cases"] = cases
                return rep
    return {"statement": "minors", "blocks": None, "cases": cases,
            "verdict": True, "witness": None}


# ---------------------------------------------------------------------------
# the shift automorphism and invariant decomposition


class ContinuousAutomorphism:
    """x -> sum lambda_j x^j acting on series by substitution."""

    __slots__ = ("ctx", "image", "var")

    def __init__(self, ctx, image, var="x", p=None):
        lam1 = image.coeff_of(var, 1)
        c0 = lam1.constant()
        if c0 == 0 or (p is not None and Fraction(c0).numerator % p == 0):
            raise SeriesError("lambda_1 must be a unit")
        if image.coeff_of(var, 0).constant() != 0:
            raise SeriesError("lambda_0 must be topologically nilpotent")
        self.ctx = ctx
        self.image = image
        self.var = var

    @property
    def t_sigma(self):
        return self.image.coeff_of(self.var, 0)

    def apply(self, series):
        return series.substitute({self.var: self.image})

    def compose(self, other):
        """First self, then other (images compose by substitution)."""
        return ContinuousAutomorphism(self.ctx, other.apply(self.image),
                                      var=self.var)

    def iterate(self, k):
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out


def make_shift_automorphism(ctx, p=None):
    """x -> x +_F t over the universal law; order p modulo ([p]_F/t)."""
    return ContinuousAutomorphism(ctx, ctx.fgl("x", "t"), var="x", p=p)


def action_context(p, deg=6, bweight=6, xcap=None):
    # x is truncated through the weight grading (trunc_plus bounds the joint
    # x,t-degree), not a degree cap: x -> x +_F t preserves total weight, so
    # the weight cut is substitution-sound while a cap on x alone is not.
    xcap = deg if xcap is None else xcap
    return Context(deg, bweight, extra_vars=("x",),
                   trunc_plus=deg + 2 * xcap + 4)


class ShiftAction:
    """The order-p cyclic action generated by var -> var +_F t."""

    def __init__(self, ctx, p, var="x"):
        self.ctx = ctx
        self.p = int(p)
        self.var = var
        self.fp = FormalP(ctx, p)
        self._images = {}
        self._pi_pows = {}
        self._c = None
        self._unit_inv = None

    def image(self, k=1):
        if k not in self._images:
            self._images[k] = self.ctx.formal_sum(self.ctx.var(self.var),
                                                  self.ctx.nseries(k))
        return self._images[k]

    def apply(self, series, k=1):
        return series.substitute({self.var: self.image(k)})

    def pi(self):
        """pi(x) = prod_{i=0}^{p-1} (x +_F [i]t), the orbit product."""
        return self.pi_power(1)

    def pi_power(self, n):
        if n not in self._pi_pows:
            if n == 0:
                self._pi_pows[n] = self.ctx.one()
            elif n == 1:
                out = self.ctx.var(self.var)
                for i in range(1, self.p):
                    out = out * self.image(i)
                self._pi_pows[n] = out
            else:
                self._pi_pows[n] = self.pi_power(n - 1) * self.pi_power(1)
        return self._pi_pows[n]

    def c_series(self):
        """prod_{i=1}^{p-1} [i]_F(t): the lowest coefficient of pi."""
        if self._c is None:
            out = self.ctx.one()
            for i in range(1, self.p):
                out = out * self.ctx.nseries(i)
            self._c = out
        return self._c

    def unit_inverse(self):
        """Inverse of c(t)/t^(p-1), a unit with constant (p-1)!."""
        if self._unit_inv is None:
            unit = self.c_series().shift_var("t", -(self.p - 1))
            self._unit_inv = unit.mul_inverse()
        return self._unit_inv


def invariant_decompose(phi, action):
    """Write an invariant series as a polynomial in the orbit product.

    Returns (psi, certificates): psi maps n to the coefficient of pi^n, each
    extracted after certifying that the lowest coefficient is divisible by
    c(t)^n (t-order at least n(p-1) modulo the ideal); certificates record
    those exact divisibilities.  Raises on non-invariant input; a divisibility
    failure raises FalsificationError.
    """
    fp = action.fp
    var = action.var
    p = action.p
    diff = phi.substitute({var: action.image(1)}) - phi
    if not fp.normal_form(diff).is_zero:
        raise SeriesError("series is not invariant under the shift")
    f = fp.normal_form(phi)
    psi = {}
    certificates = []
    while not f.is_zero:
        n = f.min_degree(var)
        alpha = f.coeff_of(var, n)
        need = n * (p - 1)
        if n == 0:
            q = alpha
        else:
            d = alpha
            uinv = action.unit_inverse()
            for _ in range(n):
                d = d * uinv
            nf = fp.normal_form(fp.clear_coprime_denominators(d))
            lo = nf.min_degree("t")
            if lo is not None and lo < need:
                raise FalsificationError(
                    "coefficient of %s^%d is not divisible by c(t)^%d" %
                    (var, n, n),
                    witness="t-order %d < %d at level %d" % (lo, need, n))
            q = nf.shift_var("t", -need)
        certificates.append({"power": n, "t_order": need})
        psi[n] = q
        f = fp.normal_form(f - q * action.pi_power(n))
        if not f.is_zero and f.min_degree(var) <= n:
            raise SeriesError("stripping failed to raise the lowest degree")
    return psi, certificates


def reconstruct(action, psi):
    out = action.ctx.zero()
    for n, q in psi.items():
        out = out + q * action.pi_power(n)
    return out


def _random_coefficient(ctx, rng, tmax=4, nterms=3, coeff_bound=9):
    picks = [{}, {"b1": 1}, {"b2": 1}, {"b1": 2}, {"b3": 1},
             {"b1": 1, "b2": 1}]
    out = ctx.zero()
    for _ in range(nterms):
        exps = dict(picks[rng.randrange(len(picks))])
        exps["t"] = rng.randint(0, tmax)
        out = out + ctx.mono(exps, coeff=rng.randint(-coeff_bound, coeff_bound))
    return out


def theorem_g_suite(p, deg=6, bweight=6, kmax=3, count=20, seed=20260814):
    """Randomized round trips psi -> phi -> psi through the decomposition."""
    kmax = max(1, min(kmax, deg // 2))
    # the level-kmax coefficient must stay fully visible: its digits reach
    # t^(kmax*(p-1) + deg) times b-monomials, behind x^kmax
    ctx = Context(deg, bweight, extra_vars=("x",),
                  trunc_plus=p * kmax + deg + bweight + 4)
    action = ShiftAction(ctx, p, "x")
    fp = action.fp
    rng = random.Random(seed + p)
    checked = 0
    for case in range(count):
        truth = {k: _random_coefficient(ctx, rng) for k in range(kmax + 1)}
        phi = reconstruct(action, truth)
        psi, _certs = invariant_decompose(phi, action)
        for k in range(kmax + 1):
            got = psi.get(k, ctx.zero())
            if not fp.normal_form(got - truth[k]).is_zero:
                return {"statement": "thmG", "p": p, "cases": checked,
                        "verdict": False,
                        "witness": "case %d power %d mismatch" % (case, k)}
        extra = [k for k in psi if k > kmax
                 and not fp.normal_form(psi[k]).is_zero]
        if extra:
            return {"statement": "thmG", "p": p, "cases": checked,
                    "verdict": False,
                    "witness": "case %d spurious powers %s" % (case, extra)}
        if not fp.normal_form(phi - reconstruct(action, psi)).is_zero:
            return {"statement": "thmG", "p": p, "cases": checked,
                    "verdict": False,
                    "witness": "case %d reconstruction mismatch" % case}
        checked += 1
    return {"statement": "thmG", "p": p, "cases": checked, "verdict": True,
            "witness": None}


# ---------------------------------------------------------------------------
# two-variable consequences


def xy_context(p, deg=6, bweight=6):
    # weight-cut truncation for the same reason as action_context
    return Context(deg, bweight, extra_vars=("x", "y"),
                   trunc_plus=deg + p + bweight + 4)


def prop_xy_series(p, deg=6, bweight=6):
    """The addition series G with prod(x +_F y +_F [i]t) = G(pi(x), pi(y)).

    Found by stripping first in x (y passive), then each coefficient in y.
    Returns (G, report); G maps (k, l) to the coefficient of u^k v^l, each
    certified integral modulo the ideal.
    """
    ctx = xy_context(p, deg=deg, bweight=bweight)
    ax = ShiftAction(ctx, p, "x")
    ay = ShiftAction(ctx, p, "y")
    fp = ax.fp
    s = ctx.formal_sum(ctx.var("x"), ctx.var("y"))
    phi = s
    for i in range(1, p):
        phi = phi * ctx.formal_sum(s, ctx.nseries(i))
    inner, _ = invariant_decompose(phi, ax)
    coefficients = {}
    for k, r_k in inner.items():
        outer, _ = invariant_decompose(r_k, ay)
        for l, q in outer.items():
            if not fp.normal_form(q).is_zero:
                coefficients[(k, l)] = q
    witness = None
    for key, q in coefficients.items():
        ok, _rep, wit = fp.is_integral_mod_ideal(q)
        if not ok:
            witness = "G[%s]: %s" % (key, wit)
            break
    verdict = witness is None
    if verdict:
        recon = ctx.zero()
        for (k, l), q in coefficients.items():
            recon = recon + q * ax.pi_power(k) * ay.pi_power(l)
        if not fp.normal_form(phi - recon).is_zero:
            verdict = False
            witness = "G does not reproduce the orbit product"
    if verdict:
        # specializing v = 0 must give back u
        for (k, l), q in coefficients.items():
            if l == 0:
                want = ctx.one() if k == 1 else ctx.zero()
                if not fp.normal_form(q - want).is_zero:
                    verdict = False
                    witness = "G(u,0) deviates from u at power %d" % k
                    break
    report = {"statement": "xy", "p": p, "cases": len(coefficients),
              "verdict": verdict, "witness": witness}
    return coefficients, report


def twisted_context(p, deg=6, bweight=6):
    cap = deg
    # beta powers each carry c(t)^-1 with ord c = p - 1, so the floor has
    # to cover roughly 2(p-1)(cap+1) before the integrality check prunes
    return Context(deg, bweight, tfloor=-(2 * p * (cap + 2) + 8),
                   extra_vars=("x", "y", "u", "v", "w"),
                   degree_caps=((("x", "y", "u", "v", "w"), cap),),
                   trunc_plus=deg + p + 4)


def twisted_fgl_alpha(p, deg=6, bweight=6):
    """F^alpha(u,v) = alpha(F(beta(u), beta(v))) for alpha = pi(x).

    beta is the compositional inverse of alpha over B[c(t)^-1].  Returns
    (F^alpha, report) after checking coefficient integrality and the group-law
    axioms at truncation, plus alpha|_{t=0} = x^p.
    """
    ctx = twisted_context(p, deg=deg, bweight=bweight)
    fp = FormalP(ctx, p)
    alpha = ctx.var("x")
    for i in range(1, p):
        alpha = alpha * ctx.formal_sum(ctx.var("x"), ctx.nseries(i))
    beta = alpha.compositional_inverse("x", poly_vars=("x",))
    bu = beta.substitute({"x": ctx.var("u")})
    bv = beta.substitute({"x": ctx.var("v")})
    mid = ctx.fgl("x", "y").substitute({"x": bu, "y": bv},
                                       poly_vars=("x", "y"))
    f_alpha = alpha.substitute({"x": mid}, poly_vars=("x",))

    witness = None
    if alpha.kill_vars(("t",)) != ctx.mono({"x": p}):
        witness = "alpha at t=0 is not x^p"
    if witness is None:
        for i in range(0, deg + 1):
            for j in range(0, deg + 1 - i):
                coeff = f_alpha.coeff_of("u", i).coeff_of("v", j)
                if coeff.is_zero:
                    continue
                ok, _rep, wit = fp.is_integral_mod_ideal(coeff)
                if not ok:
                    witness = "coefficient u^%d v^%d: %s" % (i, j, wit)
                    break
            if witness:
                break
    if witness is None:
        if f_alpha.kill_vars(("v",)) != ctx.var("u"):
            witness = "unit axiom fails"
        elif f_alpha.substitute({"u": ctx.var("v"), "v": ctx.var("u")}) != f_alpha:
            witness = "commutativity fails"
        else:
            f_vw = f_alpha.substitute({"u": ctx.var("v"), "v": ctx.var("w")})
            # every term of f_alpha has u,v-degree >= 1, so nesting it is
            # monotone for the group cap and the clipped tail stays clipped
            left = f_alpha.substitute({"u": f_alpha, "v": ctx.var("w")},
                                      poly_vars=("u",))
            right = f_alpha.substitute({"v": f_vw}, poly_vars=("v",))
            if left != right:
                witness = "associativity fails"
    report = {"statement": "twisted-fgl", "p": p,
              "cases": (deg + 1) * (deg + 2) // 2,
              "verdict": witness is None, "witness": witness}
    return f_alpha, report
