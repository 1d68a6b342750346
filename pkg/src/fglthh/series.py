"""Truncated formal power series over graded polynomial coefficients.

Series in one, two or three variables, composition, compositional
inversion, the universal formal group law built from its logarithm, and
formal sums with respect to a formal group law.  The coefficient of
``x^(k+1)`` (resp. ``x^i y^j``) is homogeneous of weight ``k`` (resp.
``i+j-1``), so every coefficient produced here is weight-correct by
construction.
"""

from __future__ import annotations

from .exactalg import GradedPoly, GeneratorTableError, _accumulate


class SeriesError(Exception):
    pass


def _as_tuple(exp, nvars):
    if nvars == 1:
        return (exp,) if isinstance(exp, int) else tuple(exp)
    return tuple(exp)


class TruncatedSeries:
    """Series with :class:`GradedPoly` coefficients, truncated above a
    total-exponent bound.

    ``coeffs`` maps exponent tuples (length = number of variables) to
    polynomial coefficients; entries above the bound are dropped on
    construction and in every operation.
    """

    __slots__ = ("table", "nvars", "bound", "coeffs")

    def __init__(self, table, nvars, bound, coeffs=None):
        self.table = table
        self.nvars = nvars
        self.bound = bound
        clean = {}
        if coeffs:
            for exp, poly in coeffs.items():
                exp = _as_tuple(exp, nvars)
                if len(exp) != nvars:
                    raise SeriesError("exponent arity mismatch")
                if sum(exp) > bound or poly.is_zero():
                    continue
                clean[exp] = poly
        self.coeffs = clean

    @classmethod
    def zero(cls, table, bound, nvars=1):
        return cls(table, nvars, bound)

    @classmethod
    def variable(cls, table, bound, nvars=1, which=0):
        exp = tuple(1 if i == which else 0 for i in range(nvars))
        return cls(table, nvars, bound, {exp: GradedPoly.one(table)})

    @classmethod
    def monomial(cls, table, bound, poly, exp, nvars=1):
        return cls(table, nvars, bound, {_as_tuple(exp, nvars): poly})

    def coeff(self, exp):
        return self.coeffs.get(_as_tuple(exp, self.nvars), GradedPoly.zero(self.table))

    def min_degree(self):
        return min((sum(e) for e in self.coeffs), default=self.bound + 1)

    def is_strict(self):
        """Zero constant term and leading coefficient one (single variable)."""
        if self.nvars != 1:
            return False
        if self.coeffs.get((0,)) is not None:
            return False
        return self.coeffs.get((1,)) == GradedPoly.one(self.table)

    def _check_compatible(self, other):
        if self.table != other.table:
            raise GeneratorTableError("series over different generator tables")
        if self.bound != other.bound:
            raise SeriesError("truncation bound mismatch")
        if self.nvars != other.nvars:
            raise SeriesError("variable count mismatch")

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.coeffs)
        for exp, poly in other.coeffs.items():
            cur = out.get(exp)
            s = poly if cur is None else cur + poly
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        return TruncatedSeries(self.table, self.nvars, self.bound, out)

    def __neg__(self):
        return TruncatedSeries(self.table, self.nvars, self.bound,
                               {e: -p for e, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_compatible(other)
        out = {}
        for e1, p1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, p2 in other.coeffs.items():
                if d1 + sum(e2) > self.bound:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = p1 * p2
                cur = out.get(e)
                out[e] = prod if cur is None else _accumulate(cur, prod)
        return TruncatedSeries(self.table, self.nvars, self.bound, out)

    def scale(self, poly_or_scalar):
        if isinstance(poly_or_scalar, GradedPoly):
            return TruncatedSeries(self.table, self.nvars, self.bound,
                                   {e: p * poly_or_scalar for e, p in self.coeffs.items()})
        return TruncatedSeries(self.table, self.nvars, self.bound,
                               {e: p.scale(poly_or_scalar) for e, p in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.table == other.table
                and self.nvars == other.nvars and self.bound == other.bound
                and self.coeffs == other.coeffs)

    def extend_table(self, target):
        return TruncatedSeries(target, self.nvars, self.bound,
                               {e: p.extend_to(target) for e, p in self.coeffs.items()})

    def truncate(self, bound):
        return TruncatedSeries(self.table, self.nvars, bound,
                               {e: p for e, p in self.coeffs.items() if sum(e) <= bound})

    def __repr__(self):
        items = sorted(self.coeffs.items())
        return f"TruncatedSeries({items!r})"


def compose(outer, inner):
    """Substitute ``inner`` into the single-variable series ``outer``.

    ``inner`` may have any number of variables but must have zero constant
    term; the result is exact through the common truncation bound.
    """
    if outer.nvars != 1:
        raise SeriesError("outer series must be single-variable")
    if outer.table != inner.table:
        raise GeneratorTableError("series over different generator tables")
    if outer.bound != inner.bound:
        raise SeriesError("truncation bound mismatch")
    if inner.min_degree() < 1:
        raise SeriesError("inner series must have zero constant term")
    out = TruncatedSeries.zero(inner.table, inner.bound, inner.nvars)
    if (0,) in outer.coeffs:
        out = out + TruncatedSeries(inner.table, inner.nvars, inner.bound,
                                    {(0,) * inner.nvars: outer.coeffs[(0,)]})
    power = None
    step = inner.min_degree()
    for k in range(1, outer.bound + 1):
        if k * max(step, 1) > outer.bound:
            break
        power = inner if power is None else power * inner
        ck = outer.coeffs.get((k,))
        if ck is not None:
            out = out + power.scale(ck)
    return out


def comp_inverse(f):
    """Compositional inverse of a strict series, degree by degree.

    Each new coefficient of the inverse appears linearly, so appending the
    correction ``-[x^k] f(g)`` at exponent ``k`` is an exact solve.
    """
    if not f.is_strict():
        raise SeriesError("compositional inverse requires a strict series")
    table, bound = f.table, f.bound
    g = TruncatedSeries.variable(table, bound)
    for k in range(2, bound + 1):
        h = compose(f, g)
        err = h.coeff((k,))
        if not err.is_zero():
            g = g + TruncatedSeries.monomial(table, bound, -err, (k,))
    return g


def series_from_coefficient_table(table, bound, coeff_of_power):
    """Strict series ``x + sum_n c_n x^(n+1)`` from a coefficient table
    ``{n: c_n}`` (n >= 1)."""
    coeffs = {(1,): GradedPoly.one(table)}
    for n, poly in coeff_of_power.items():
        if n + 1 <= bound:
            coeffs[(n + 1,)] = poly
    return TruncatedSeries(table, 1, bound, coeffs)


class FGLaw:
    """Formal group law ``F(x, y) = x + y + sum a_ij x^i y^j`` truncated at
    a total-degree bound, with symmetric polynomial coefficients."""

    __slots__ = ("table", "bound", "series")

    def __init__(self, table, bound, series):
        self.table = table
        self.bound = bound
        self.series = series  # two-variable TruncatedSeries

    def a(self, i, j):
        return self.series.coeff((i, j))

    def coefficients(self):
        return {e: p for e, p in self.series.coeffs.items()
                if e[0] >= 1 and e[1] >= 1}

    def extend_table(self, target):
        return FGLaw(target, self.bound, self.series.extend_table(target))

    def evaluate(self, s, t):
        """``F(s, t)`` for series with zero constant term (any arity)."""
        if s.nvars != t.nvars or s.bound != t.bound:
            raise SeriesError("incompatible series in formal group law evaluation")
        if s.min_degree() < 1 or t.min_degree() < 1:
            raise SeriesError("formal group law arguments need zero constant term")
        bound = s.bound
        out = s + t
        s_pows = {1: s}
        t_pows = {1: t}
        s_min, t_min = max(s.min_degree(), 1), max(t.min_degree(), 1)
        for (i, j), a in sorted(self.series.coeffs.items()):
            if i < 1 or j < 1:
                continue
            if i * s_min + j * t_min > bound:
                continue
            for pows, base, k in ((s_pows, s, i), (t_pows, t, j)):
                while max(pows) < k:
                    m = max(pows)
                    pows[m + 1] = pows[m] * base
            term = (s_pows[i] * t_pows[j]).scale(a)
            out = out + term
        return out


def fgl_from_log(m_list, bound):
    """Universal formal group law from its logarithm coefficients.

    ``m_list[n-1]`` is the weight-``n`` logarithm coefficient (the
    coefficient of ``x^(n+1)``); ``F(x,y) = exp(log(x) + log(y))`` where
    ``exp`` is the compositional inverse of ``log``.  With all coefficients
    zero this yields the additive law ``x + y``.
    """
    if not m_list:
        raise SeriesError("logarithm coefficients required (may be zero polynomials)")
    table = m_list[0].table
    if len(m_list) < bound - 1:
        raise SeriesError("insufficient truncation data for the requested bound")
    log = series_from_coefficient_table(
        table, bound, {n + 1: p for n, p in enumerate(m_list)})
    exp = comp_inverse(log)
    x2 = TruncatedSeries.variable(table, bound, nvars=2, which=0)
    y2 = TruncatedSeries.variable(table, bound, nvars=2, which=1)
    log_xy = TruncatedSeries(table, 2, bound,
                             {(k, 0): p for (k,), p in log.coeffs.items()})
    log_xy = log_xy + TruncatedSeries(table, 2, bound,
                                      {(0, k): p for (k,), p in log.coeffs.items()})
    F2 = compose(exp, log_xy)
    law = FGLaw(table, bound, F2)
    # F(x, 0) = x and symmetry are construction invariants; fail loudly if broken
    for (i, j), p in law.series.coeffs.items():
        if j == 0 and not (i == 1 and p == GradedPoly.one(table)):
            raise SeriesError("formal group law does not restrict to the identity")
        if law.a(i, j) != law.a(j, i):
            raise SeriesError("formal group law is not symmetric")
    return law


def fgl_formal_sum(law, terms):
    """Iterated formal sum ``F(t1, F(t2, ...))`` associated to the right.

    Every term must have zero constant term; for the additive law the
    result degenerates to the ordinary sum.
    """
    if not terms:
        raise SeriesError("formal sum of an empty list")
    for t in terms:
        if t.min_degree() < 1:
            raise SeriesError("formal sum terms must have zero constant term")
        if t.bound != terms[0].bound or t.nvars != terms[0].nvars:
            raise SeriesError("formal sum terms must share bound and arity")
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = law.evaluate(t, acc)
    return acc


def log_of_series(m_list, bound, inner):
    """``log(inner)`` where ``log(x) = x + sum m_n x^(n+1)``."""
    table = inner.table
    log = series_from_coefficient_table(
        table, bound, {n + 1: p for n, p in enumerate(m_list)})
    return compose(log, inner)
