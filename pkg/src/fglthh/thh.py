"""Homotopy rings of topological Hochschild homology and the sigma operator.

Elements live in ``base (x) E(exterior generators)`` for one of three
flavors: moving coordinates (lambda'), split coordinates (e) over the
integral Lazard basis, and the p-typical case (lambda) over Hazewinkel
generators.  The sigma operator is a degree +1 right derivation vanishing
on the lambda generators; in the split flavor its exterior values are
forced by the vanishing of its square.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (GenTable, GradedPoly, IntegralityError, _norm_coeff)
from .fgl import LazardBasis, TypicalBasis, m_name, x_name, ell_name, v_name
from .algebroid import MuStructure, TypicalStructure, b_name, c_name, t_name


@dataclass(frozen=True)
class ThhFlavor:
    """Base ring plus exterior alphabet for one homotopy ring."""

    tag: str
    base: GenTable
    ext_prefix: str
    ext_weights: tuple  # ((index, weight), ...)
    prime: int | None = None
    truncation_weight: int | None = None

    def ext_weight(self, n):
        return dict(self.ext_weights)[n]

    def ext_degree(self, n):
        return 2 * self.ext_weight(n) + 1

    def ext_indices(self):
        return tuple(n for n, _ in self.ext_weights)

    def ext_text(self, subset):
        return "*".join(f"{self.ext_prefix}_{n}" for n in subset)


def mu_moving_flavor(basis: LazardBasis):
    return ThhFlavor("mu-moving", basis.x_table, "lambda'",
                     tuple((n, n) for n in range(1, basis.N + 1)),
                     truncation_weight=basis.N)


def mu_split_flavor(basis: LazardBasis):
    return ThhFlavor("mu-split", basis.x_table, "e",
                     tuple((n, n) for n in range(1, basis.N + 1)),
                     truncation_weight=basis.N)


def bp_flavor(tbasis: TypicalBasis):
    # the ring on v_1..v_max_n is complete through the weight just below v_{max_n+1}
    p = tbasis.p
    return ThhFlavor("bp", tbasis.v_table, "lambda",
                     tuple((n, p ** n - 1) for n in range(1, tbasis.max_n + 1)),
                     prime=p,
                     truncation_weight=p ** (tbasis.max_n + 1) - 2)


def merge_sign(left, right):
    """Sign of sorting the concatenation of two disjoint sorted index tuples."""
    inv = 0
    for a in left:
        for b in right:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


class ExtElement:
    """Element of ``base (x) E(ext)``: exterior monomials (strictly sorted
    index tuples) with polynomial coefficients."""

    __slots__ = ("flavor", "terms")

    def __init__(self, flavor, terms=None):
        self.flavor = flavor
        clean = {}
        if terms:
            for subset, poly in terms.items():
                if poly.is_zero():
                    continue
                clean[tuple(subset)] = poly
        self.terms = clean

    @classmethod
    def zero(cls, flavor):
        return cls(flavor)

    @classmethod
    def from_base(cls, flavor, poly):
        return cls(flavor, {(): poly})

    @classmethod
    def ext_gen(cls, flavor, n, coeff=None):
        poly = GradedPoly.one(flavor.base) if coeff is None else coeff
        return cls(flavor, {(n,): poly})

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if self.flavor != other.flavor:
            raise ValueError("flavor mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for s, p in other.terms.items():
            cur = out.get(s)
            v = p if cur is None else cur + p
            if v.is_zero():
                out.pop(s, None)
            else:
                out[s] = v
        return ExtElement(self.flavor, out)

    def __neg__(self):
        return ExtElement(self.flavor, {s: -p for s, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ExtElement(self.flavor, {s: p.scale(c) for s, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GradedPoly):
            return ExtElement(self.flavor,
                              {s: p * other for s, p in self.terms.items()})
        self._check(other)
        out = {}
        for s1, p1 in self.terms.items():
            for s2, p2 in other.terms.items():
                if set(s1) & set(s2):
                    continue
                sign = merge_sign(s1, s2)
                s = tuple(sorted(s1 + s2))
                prod = (p1 * p2).scale(sign)
                cur = out.get(s)
                v = prod if cur is None else cur + prod
                if v.is_zero():
                    out.pop(s, None)
                else:
                    out[s] = v
        return ExtElement(self.flavor, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GradedPoly):
            return ExtElement(self.flavor,
                              {s: other * p for s, p in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, ExtElement) and self.flavor == other.flavor
                and self.terms == other.terms)

    def internal_degree(self):
        """Common internal degree of all terms; None when zero."""
        deg = None
        for s, p in self.terms.items():
            w = p.weight()
            d = 2 * w + sum(self.flavor.ext_degree(n) for n in s)
            if deg is None:
                deg = d
            elif deg != d:
                raise ValueError("element is not homogeneous")
        return deg

    def coefficient(self, subset, mono):
        poly = self.terms.get(tuple(subset))
        return 0 if poly is None else poly.terms.get(mono, 0)

    def is_integral(self):
        return all(p.is_integral() for p in self.terms.values())

    def map_coefficients(self, fn):
        return ExtElement(self.flavor,
                          {s: fn(p) for s, p in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for s, p in self.sorted_terms():
            ext = self.flavor.ext_text(s)
            items = p.sorted_terms()
            if len(items) == 1:
                mono, c = items[0]
                body = self.flavor.base.mono_text(mono)
                factors = [x for x in ([] if mono == () else [body]) + ([ext] if ext else [])]
                core = "*".join(factors) if factors else "1"
                if c == 1:
                    text = core
                elif c == -1:
                    text = f"-{core}"
                else:
                    cstr = str(c) if not isinstance(c, Fraction) else f"{c.numerator}/{c.denominator}"
                    text = f"{cstr}*{core}" if factors else cstr
            else:
                text = f"({p})*{ext}" if ext else f"({p})"
            chunks.append(text)
        out = chunks[0]
        for ch in chunks[1:]:
            if ch.startswith("-"):
                out += " - " + ch[1:]
            else:
                out += " + " + ch
        return out

    def __repr__(self):
        return f"ExtElement({self})"


class SigmaTable:
    """The sigma derivation recorded on base and exterior generators.

    Extension to arbitrary elements uses the right-action Leibniz rule
    ``sigma(x*y) = x*sigma(y) + (-1)^|y| sigma(x)*y``.
    """

    def __init__(self, flavor, on_base, on_ext=None):
        self.flavor = flavor
        self.on_base = dict(on_base)
        self.on_ext = dict(on_ext or {})

    def sigma_base_poly(self, poly):
        """Derivation on a base polynomial (even, so sign-free)."""
        out = ExtElement.zero(self.flavor)
        table = self.flavor.base
        for mono, coeff in poly.terms.items():
            for k, (gi, e) in enumerate(mono):
                name = table.name(gi)
                rest = mono[:k] + ((gi, e - 1),) * (e > 1) + mono[k + 1:]
                cof = GradedPoly(table, {rest: _norm_coeff(coeff * e)})
                out = out + self.on_base[name] * cof
        return out

    def _sigma_ext_monomial(self, subset):
        if not subset:
            return ExtElement.zero(self.flavor)
        head, tail = subset[0], subset[1:]
        sh = self.on_ext.get(head, ExtElement.zero(self.flavor))
        head_elt = ExtElement.ext_gen(self.flavor, head)
        out = head_elt * self._sigma_ext_monomial(tail)
        sign = -1 if len(tail) % 2 else 1
        tail_elt = ExtElement(self.flavor, {tail: GradedPoly.one(self.flavor.base)})
        return out + (sh * tail_elt).scale(sign)

    def sigma(self, elt):
        out = ExtElement.zero(self.flavor)
        for subset, coeff in elt.terms.items():
            sc = self.sigma_base_poly(coeff)
            lam = ExtElement(self.flavor, {subset: GradedPoly.one(self.flavor.base)})
            sign = -1 if len(subset) % 2 else 1
            out = out + (sc * lam).scale(sign)
            if self.on_ext:
                out = out + coeff * self._sigma_ext_monomial(subset)
        return out

    def sigma_prime(self, elt):
        """Left-derivation variant: sign twist by the internal degree."""
        out = ExtElement.zero(self.flavor)
        for subset, coeff in elt.terms.items():
            piece = self.sigma(ExtElement(self.flavor, {subset: coeff}))
            d = 2 * coeff.weight() + sum(self.flavor.ext_degree(n) for n in subset)
            out = out + (piece.scale(-1) if d % 2 else piece)
        return out


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def sigma_mu_moving(basis: LazardBasis):
    """Moving-coordinate sigma: the rational derivation sending the
    logarithm coefficients to the exterior generators, rewritten integrally
    on the integral basis."""
    flavor = mu_moving_flavor(basis)
    on_base = {}
    for n in range(1, basis.N + 1):
        expr = basis.x_in_m[n]
        lam_coeffs = {}
        for mono, coeff in expr.terms.items():
            for k, (gi, e) in enumerate(mono):
                idx = int(basis.m_table.name(gi).split("_")[1])
                rest = mono[:k] + ((gi, e - 1),) * (e > 1) + mono[k + 1:]
                cur = lam_coeffs.setdefault(idx, GradedPoly.zero(basis.m_table))
                lam_coeffs[idx] = cur + GradedPoly(
                    basis.m_table, {rest: _norm_coeff(coeff * e)})
        terms = {}
        for idx, poly in lam_coeffs.items():
            rewritten, integral = basis.rewrite_m_to_x(poly)
            if not integral:
                raise IntegralityError(
                    f"sigma(x_{n}) has a non-integral lambda'_{idx} coefficient")
            if not rewritten.is_zero():
                terms[(idx,)] = rewritten
        on_base[x_name(n)] = ExtElement(flavor, terms)
    return SigmaTable(flavor, on_base)


def sigma_mu_split(structure: MuStructure):
    """Split-coordinate sigma: base values are the linear split part of the
    right unit; exterior values are solved inductively from the vanishing
    of sigma squared, with exact division."""
    basis = structure.basis
    flavor = mu_split_flavor(basis)
    b_names = [b_name(k) for k in range(1, basis.N + 1)]
    on_base = {}
    for n in range(1, basis.N + 1):
        eta = structure.eta_x(n)
        linear = eta.component_in(b_names, 1)
        terms = {}
        for bmono, cof in linear.collect_by(b_names).items():
            idx = int(structure.xb_table.name(bmono[0][0]).split("_")[1])
            terms[(idx,)] = cof.substitute({}, basis.x_table)
        on_base[x_name(n)] = ExtElement(flavor, terms)

    table = SigmaTable(flavor, on_base, {})
    for n in range(1, basis.N + 1):
        sx = on_base[x_name(n)]
        lead = sx.coefficient((n,), ())
        if lead == 0:
            raise IntegralityError(f"sigma(x_{n}) has vanishing e_{n} coefficient")
        residual = table.sigma(table.sigma(ExtElement.from_base(flavor, GradedPoly.gen(basis.x_table, x_name(n)))))
        value = residual.scale(Fraction(-1, int(lead)))
        if not value.is_integral():
            raise IntegralityError(f"sigma(e_{n}) requires a non-exact division")
        table.on_ext[n] = value
    return table


def lambda_in_e(structure: MuStructure):
    """Conversion of the moving exterior generators into the split flavor:
    the linear split part of each moving coordinate."""
    basis = structure.basis
    flavor = mu_split_flavor(basis)
    b_names = [b_name(k) for k in range(1, basis.N + 1)]
    out = {}
    for n in range(1, basis.N + 1):
        linear = structure.c_in_xb(n).component_in(b_names, 1)
        terms = {}
        for bmono, cof in linear.collect_by(b_names).items():
            idx = int(structure.xb_table.name(bmono[0][0]).split("_")[1])
            terms[(idx,)] = cof.substitute({}, basis.x_table)
        out[n] = ExtElement(flavor, terms)
    return out


def convert_moving_to_split(conversion, elt):
    """Push a moving-flavor element through a lambda'-to-e conversion table."""
    target_flavor = next(iter(conversion.values())).flavor
    out = ExtElement.zero(target_flavor)
    for subset, coeff in elt.terms.items():
        acc = ExtElement.from_base(target_flavor, coeff)
        for n in subset:
            acc = acc * conversion[n]
        out = out + acc
    return out


def sigma_bp(tbasis: TypicalBasis):
    """p-typical sigma, computed by both the defining recursion and the
    rational route; any disagreement is a hard failure."""
    flavor = bp_flavor(tbasis)
    p = tbasis.p

    rational = {}
    for n in range(1, tbasis.max_n + 1):
        expr = tbasis.v_in_ell(n)
        lam_coeffs = {}
        for mono, coeff in expr.terms.items():
            for k, (gi, e) in enumerate(mono):
                idx = int(tbasis.ell_table.name(gi).split("_")[1])
                rest = mono[:k] + ((gi, e - 1),) * (e > 1) + mono[k + 1:]
                cur = lam_coeffs.setdefault(idx, GradedPoly.zero(tbasis.ell_table))
                lam_coeffs[idx] = cur + GradedPoly(
                    tbasis.ell_table, {rest: _norm_coeff(coeff * e)})
        terms = {}
        for idx, poly in lam_coeffs.items():
            rewritten, integral = tbasis.rewrite_ell_to_v(poly)
            if not integral:
                raise IntegralityError(
                    f"sigma(v_{n}) is not p-locally integral at p={p}")
            if not rewritten.is_zero():
                terms[(idx,)] = rewritten
        rational[v_name(n)] = ExtElement(flavor, terms)

    recursive = {}
    for n in range(1, tbasis.max_n + 1):
        lam_n = ExtElement.ext_gen(flavor, n).scale(p)
        acc = lam_n
        for i in range(1, n):
            vpow = GradedPoly.gen(tbasis.v_table, v_name(n - i)) ** (p ** i)
            acc = acc - ExtElement.ext_gen(flavor, i, vpow)
            pl = tbasis.pn_ell(i)
            vpow1 = GradedPoly.gen(tbasis.v_table, v_name(n - i)) ** (p ** i - 1)
            acc = acc - recursive[v_name(n - i)] * (pl * vpow1)
        recursive[v_name(n)] = acc

    for name in rational:
        if rational[name] != recursive[name]:
            raise IntegralityError(
                f"recursive and rational sigma disagree on {name}")
    return SigmaTable(flavor, recursive)


# ---------------------------------------------------------------------------
# Hurewicz images
# ---------------------------------------------------------------------------

def hurewicz_mu(structure: MuStructure, poly):
    """Image of an integral-basis polynomial in the split homology ring:
    expand over the logarithm coefficients and read them as moving
    coordinates.  Returns ``(image, integral)``."""
    basis = structure.basis
    images = {x_name(n): basis.x_in_m[n].substitute(
        {m_name(k): GradedPoly.gen(structure.c_table, c_name(k))
         for k in range(1, basis.N + 1)}, structure.c_table)
        for n in range(1, basis.N + 1)}
    out = poly.substitute(images, structure.c_table)
    return out, out.is_integral()


def hurewicz_bp(tstruct: TypicalStructure, poly):
    """Image of a Hazewinkel-basis polynomial in the p-typical homology ring."""
    tbasis = tstruct.tbasis
    images = {v_name(n): tbasis.v_in_ell(n).substitute(
        {ell_name(k): GradedPoly.gen(tstruct.t_table, t_name(k))
         for k in range(1, tbasis.max_n + 1)}, tstruct.t_table)
        for n in range(1, tbasis.max_n + 1)}
    out = poly.substitute(images, tstruct.t_table)
    return out, out.is_integral()
