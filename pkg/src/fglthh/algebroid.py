"""Structure maps of the formal-group Hopf algebroids.

Right units, conjugation and coproduct in absolute coordinates, the
absolute-to-moving coordinate change (solved degree by degree from the
formal sum), and the p-typical right unit.  Conjugation and coproduct are
implemented only for the split (absolute) coordinate algebra, where the
classical closed data exists; the moving and p-typical coalgebras carry
them abstractly but no formulas are produced for them here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import (GenTable, GradedPoly, IntegralityError,
                       DegreeGuardError, poly_sum)
from .series import (TruncatedSeries, compose, comp_inverse,
                     fgl_formal_sum, series_from_coefficient_table)
from .fgl import LazardBasis, TypicalBasis, m_name, ell_name


def b_name(n):
    return f"b_{n}"


def c_name(n):
    return f"c_{n}"


def t_name(n):
    return f"t_{n}"


@dataclass(frozen=True)
class CoordFlavor:
    """Choice of coordinate coalgebra: split (b), moving (c) or p-typical (t).

    The flavor fixes the coefficient alphabet and the downstream exterior
    generator names (e, lambda', lambda respectively).
    """

    tag: str
    prime: int | None = None

    @classmethod
    def absolute(cls):
        return cls("absolute-b")

    @classmethod
    def moving(cls):
        return cls("moving-c")

    @classmethod
    def typical(cls, p):
        return cls("typical-t", p)

    def coord_name(self, n):
        return {"absolute-b": b_name, "moving-c": c_name, "typical-t": t_name}[self.tag](n)

    def coord_weight(self, n):
        if self.tag == "typical-t":
            return self.prime ** n - 1
        return n

    @property
    def ext_prefix(self):
        return {"absolute-b": "e", "moving-c": "lambda'", "typical-t": "lambda"}[self.tag]

    def coord_table(self, max_n):
        return GenTable([(self.coord_name(n), self.coord_weight(n))
                         for n in range(1, max_n + 1)])


class UnsupportedFlavorError(ValueError):
    """Conjugation and coproduct formulas exist only for the split
    coordinate algebra; the moving and p-typical versions are declared out
    of scope rather than guessed."""


def generic_strict_series(table, names_by_degree, bound):
    """``x + sum_n g_n x^(n+1)`` for an alphabet ``{n: name}``."""
    return series_from_coefficient_table(
        table, bound,
        {n: GradedPoly.gen(table, name) for n, name in names_by_degree.items()})


def moving_right_unit(n, table=None):
    """Right unit on the weight-n logarithm coefficient in moving
    coordinates.  A closed divisor sum, so it needs no truncation data; a
    private table of exactly the required size is built when none is given."""
    if n == 0:
        if table is None:
            table = GenTable([(m_name(1), 1), (c_name(1), 1)])
        return GradedPoly.one(table)
    if table is None:
        table = GenTable([(m_name(k), k) for k in range(1, n + 1)]
                         + [(c_name(k), k) for k in range(1, n + 1)])
    parts = []
    for i in range(0, n + 1):
        if (n + 1) % (i + 1):
            continue
        j = (n + 1) // (i + 1) - 1
        mi = GradedPoly.one(table) if i == 0 else GradedPoly.gen(table, m_name(i))
        cj = GradedPoly.one(table) if j == 0 else GradedPoly.gen(table, c_name(j))
        parts.append(mi * cj ** (i + 1))
    return poly_sum(parts, table)


class MuStructure:
    """Structure-map tables over one Lazard basis.

    Everything heavier than the conjugates is computed lazily and cached:
    right units on the logarithm and integral generators, the moving
    coordinates, and the coproduct.
    """

    def __init__(self, basis: LazardBasis):
        self.basis = basis
        N = basis.N
        self.N = N
        self.b_table = GenTable([(b_name(n), n) for n in range(1, N + 1)])
        self.c_table = GenTable([(c_name(n), n) for n in range(1, N + 1)])
        self.mb_table = basis.m_table.union(self.b_table)
        self.xb_table = basis.x_table.union(self.b_table)
        self.mc_table = basis.m_table.union(self.c_table)

        f_b = generic_strict_series(self.b_table,
                                    {n: b_name(n) for n in range(1, N + 1)}, N + 1)
        fbar = comp_inverse(f_b)
        self.chi = {n: fbar.coeff(n + 1) for n in range(1, N + 1)}

        log_m = series_from_coefficient_table(
            basis.m_table, N + 1,
            {n: GradedPoly.gen(basis.m_table, m_name(n)) for n in range(1, N + 1)})
        exp_m = comp_inverse(log_m)
        self.mbar = {n: exp_m.coeff(n + 1) for n in range(1, N + 1)}

        self._eta_m = None
        self._eta_x = {}
        self._c_in_xb = None
        self._psi = None

    def _check_range(self, n):
        if not 1 <= n <= self.N:
            raise DegreeGuardError(
                f"index {n} outside the truncation (1..{self.N})")

    # -- right unit, absolute coordinates ------------------------------------

    def eta_m(self, n):
        """Right unit on the weight-n logarithm coefficient, in the split
        alphabet: the degree-n coefficient of ``log(f^{-1}(x))``."""
        self._check_range(n)
        if self._eta_m is None:
            table = self.mb_table
            log_mb = series_from_coefficient_table(
                table, self.N + 1,
                {k: GradedPoly.gen(table, m_name(k)) for k in range(1, self.N + 1)})
            f_mb = generic_strict_series(table,
                                         {k: b_name(k) for k in range(1, self.N + 1)},
                                         self.N + 1)
            fbar_mb = comp_inverse(f_mb)
            eta_series = compose(log_mb, fbar_mb)
            self._eta_m = {k: eta_series.coeff(k + 1) for k in range(1, self.N + 1)}
        return self._eta_m[n]

    def eta_x(self, n):
        """Right unit on the weight-n integral generator: computed rationally
        on the logarithm expansion, then rewritten integrally."""
        self._check_range(n)
        if n not in self._eta_x:
            images = {m_name(k): self.eta_m(k) for k in range(1, self.N + 1)}
            raw = self.basis.x_in_m[n].extend_to(self.mb_table).substitute(
                images, self.mb_table)
            out = self._rewrite_mb_to_xb(raw)
            if not out.is_integral():
                raise IntegralityError(f"right unit of x_{n} is not integral")
            self._eta_x[n] = out
        return self._eta_x[n]

    def _rewrite_mb_to_xb(self, poly):
        images = self.basis.m_images(self.xb_table)
        return poly.substitute(images, self.xb_table)

    # -- right unit, moving coordinates ---------------------------------------

    def eta_m_moving(self, n):
        """Right unit on the weight-n logarithm coefficient in moving
        coordinates: the divisor sum over (i+1)(j+1) = n+1."""
        return moving_right_unit(n, self.mc_table)

    # -- moving coordinates ----------------------------------------------------

    def c_in_xb(self, n):
        """The weight-n moving coordinate expressed in integral and split
        generators, from the degree-by-degree formal-sum solve."""
        self._check_range(n)
        if self._c_in_xb is None:
            self._c_in_xb = self._solve_moving()
        return self._c_in_xb[n]

    def _solve_moving(self):
        N = self.N
        mc = self.mc_table
        bound = N + 1
        law = self.basis.fgl.extend_table(mc)
        terms = [TruncatedSeries.variable(mc, bound)]
        for k in range(1, N + 1):
            terms.append(TruncatedSeries.monomial(
                mc, bound, GradedPoly.gen(mc, c_name(k)), k + 1))
        phi = fgl_formal_sum(law, terms)

        m_images = self.basis.m_images(self.xb_table)
        c_solved = {}
        for n in range(1, N + 1):
            coeff = phi.coeff(n + 1)
            if coeff.coefficient_of_gen(c_name(n)) != 1:
                raise IntegralityError(
                    f"moving coordinate {n} does not enter the formal sum linearly")
            tail = coeff - GradedPoly.gen(mc, c_name(n))
            images = dict(m_images)
            images.update({c_name(j): c_solved[j] for j in range(1, n)})
            lowered = tail.substitute(images, self.xb_table)
            c_solved[n] = self.chi[n].extend_to(self.xb_table) - lowered
            if not c_solved[n].is_integral():
                raise IntegralityError(f"moving coordinate {n} is not integral")
        return c_solved

    def c_in_mb(self, n):
        """Moving coordinate pushed back to the logarithm alphabet, for
        cross-checking the two right-unit presentations."""
        images = self.basis.x_images(self.mb_table)
        return self.c_in_xb(n).substitute(images, self.mb_table)

    # -- coproduct --------------------------------------------------------------

    @property
    def psi_tables(self):
        """Coproduct data: raw polynomials over the doubled alphabet, with the
        inner alphabet carrying the left tensor factor."""
        if self._psi is None:
            N = self.N
            inner = GenTable([(f"b''_{n}", n) for n in range(1, N + 1)])
            outer = GenTable([(f"b'_{n}", n) for n in range(1, N + 1)])
            both = inner.union(outer)
            f_inner = generic_strict_series(both,
                                            {n: f"b''_{n}" for n in range(1, N + 1)},
                                            N + 1)
            f_outer = generic_strict_series(both,
                                            {n: f"b'_{n}" for n in range(1, N + 1)},
                                            N + 1)
            comp = compose(f_outer, f_inner)
            self._psi = {
                "inner": inner, "outer": outer, "table": both,
                "raw": {n: comp.coeff(n + 1) for n in range(1, N + 1)},
            }
        return self._psi

    def psi(self, n):
        """Coproduct of the weight-n split coordinate as sorted tensor pairs
        ``(left monomial, right polynomial)`` over the split alphabet."""
        self._check_range(n)
        data = self.psi_tables
        raw = data["raw"][n]
        groups = raw.collect_by(data["inner"].names)
        pairs = []
        for inner_mono, outer_poly in groups.items():
            left = GradedPoly(data["table"], {inner_mono: 1}).substitute(
                {f"b''_{k}": GradedPoly.gen(self.b_table, b_name(k))
                 for k in range(1, self.N + 1)}, self.b_table)
            right = outer_poly.substitute(
                {f"b'_{k}": GradedPoly.gen(self.b_table, b_name(k))
                 for k in range(1, self.N + 1)}, self.b_table)
            pairs.append((left, right))
        pairs.sort(key=lambda lr: self.b_table.mono_key(next(iter(lr[0].terms))))
        return pairs

    # -- axioms -----------------------------------------------------------------

    def counit_residual(self, n):
        """``(id (x) eps) psi(b_n) - b_n``; zero when the counit axiom holds."""
        data = self.psi_tables
        images = {f"b'_{k}": GradedPoly.zero(self.b_table) for k in range(1, self.N + 1)}
        images.update({f"b''_{k}": GradedPoly.gen(self.b_table, b_name(k))
                       for k in range(1, self.N + 1)})
        folded = data["raw"][n].substitute(images, self.b_table)
        return folded - GradedPoly.gen(self.b_table, b_name(n))

    def coassociativity_residual(self, n):
        """Difference of the two double coproducts on the weight-n generator."""
        data = self.psi_tables
        N = self.N
        triple = GenTable([(f"u_{k}", k) for k in range(1, N + 1)]
                          + [(f"v_{k}", k) for k in range(1, N + 1)]
                          + [(f"w_{k}", k) for k in range(1, N + 1)])

        def psi_on(k, left_prefix, right_prefix):
            images = {f"b''_{j}": GradedPoly.gen(triple, f"{left_prefix}_{j}")
                      for j in range(1, N + 1)}
            images.update({f"b'_{j}": GradedPoly.gen(triple, f"{right_prefix}_{j}")
                           for j in range(1, N + 1)})
            return data["raw"][k].substitute(images, triple)

        left_first = data["raw"][n].substitute(
            {**{f"b''_{j}": psi_on(j, "u", "v") for j in range(1, N + 1)},
             **{f"b'_{j}": GradedPoly.gen(triple, f"w_{j}") for j in range(1, N + 1)}},
            triple)
        right_first = data["raw"][n].substitute(
            {**{f"b''_{j}": GradedPoly.gen(triple, f"u_{j}") for j in range(1, N + 1)},
             **{f"b'_{j}": psi_on(j, "v", "w") for j in range(1, N + 1)}},
            triple)
        return left_first - right_first

    def antipode_residual(self, n):
        """Multiply-then-fold of ``(chi (x) id) psi(b_n)``; equals the counit
        value, so it must vanish for positive weight."""
        data = self.psi_tables
        images = {f"b''_{k}": self.chi[k] for k in range(1, self.N + 1)}
        images.update({f"b'_{k}": GradedPoly.gen(self.b_table, b_name(k))
                       for k in range(1, self.N + 1)})
        return data["raw"][n].substitute(images, self.b_table)


def conjugation_chi(structure: MuStructure, flavor: CoordFlavor):
    """Conjugation table for the requested coordinate flavor."""
    if flavor.tag != "absolute-b":
        raise UnsupportedFlavorError(
            f"no conjugation formulas for the {flavor.tag} coordinates")
    return dict(structure.chi)


def coproduct_psi(structure: MuStructure, flavor: CoordFlavor, n):
    """Coproduct tensor pairs for the requested coordinate flavor."""
    if flavor.tag != "absolute-b":
        raise UnsupportedFlavorError(
            f"no coproduct formulas for the {flavor.tag} coordinates")
    return structure.psi(n)


# ---------------------------------------------------------------------------
# p-typical structure maps
# ---------------------------------------------------------------------------

class TypicalStructure:
    """Right-unit data for the p-typical pair at a concrete prime."""

    def __init__(self, tbasis: TypicalBasis):
        self.tbasis = tbasis
        p, max_n = tbasis.p, tbasis.max_n
        self.t_table = GenTable([(t_name(n), p ** n - 1) for n in range(1, max_n + 1)])
        self.ellt_table = tbasis.ell_table.union(self.t_table)
        self.vt_table = tbasis.v_table.union(self.t_table)

    def eta_ell(self, n):
        """``sum_{i+j=n} ell_i t_j^(p^i)`` with leading and trailing units."""
        p = self.tbasis.p
        table = self.ellt_table
        parts = []
        for i in range(0, n + 1):
            j = n - i
            li = GradedPoly.one(table) if i == 0 else GradedPoly.gen(table, ell_name(i))
            tj = GradedPoly.one(table) if j == 0 else GradedPoly.gen(table, t_name(j))
            parts.append(li * tj ** (p ** i))
        return poly_sum(parts, table)

    def epsilon_eta_ell(self, n):
        """Augmentation (all t to zero) applied to the right unit."""
        images = {t_name(k): GradedPoly.zero(self.tbasis.ell_table)
                  for k in range(1, self.tbasis.max_n + 1)}
        images.update({ell_name(k): GradedPoly.gen(self.tbasis.ell_table, ell_name(k))
                       for k in range(1, self.tbasis.max_n + 1)})
        return self.eta_ell(n).substitute(images, self.tbasis.ell_table)


def typicality_filter(structure, tstruct: TypicalStructure, n):
    """Apply the p-typicalization correspondence to the moving right unit:
    logarithm and moving coordinates survive exactly at prime-power indices,
    landing on the p-typical alphabet.  ``structure`` may be None, in which
    case the closed divisor sum is used directly."""
    p = tstruct.tbasis.p
    target = tstruct.ellt_table
    poly = (structure.eta_m_moving(n) if structure is not None
            else moving_right_unit(n))
    used = {poly.table.name(i) for mono in poly.terms for i, _ in mono}
    images = {}
    for name in used:
        family, j = name.split("_")
        j = int(j)
        k, q = 0, 1
        while q < j + 1:
            q *= p
            k += 1
        hit = (q == j + 1)
        if not hit:
            images[name] = GradedPoly.zero(target)
        elif family == "m":
            images[name] = GradedPoly.gen(target, ell_name(k))
        else:
            images[name] = GradedPoly.gen(target, t_name(k))
    return poly.substitute(images, target)
