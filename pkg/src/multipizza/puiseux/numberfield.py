"""Real algebraic coefficients.

A :class:`NumberField` is Q(theta) for a real root theta of an irreducible
rational polynomial, pinned down by an isolating interval with rational
endpoints.  Elements (:class:`Alg`) are polynomials in theta of degree below
the field degree, so zero testing is exact.  Signs and cross-field
comparisons use exact rational interval arithmetic with bisection; when an
interval budget runs out a :class:`CoefficientFieldFailure` is raised instead
of guessing.

Plain :class:`fractions.Fraction` values are used for rational coefficients
everywhere; ``Coeff`` below means ``Fraction | Alg``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

import sympy
from sympy import QQ, CRootOf, Poly

from ..errors import CoefficientFieldFailure

# bisection steps allowed per decision; raised by callers that need more
REFINEMENT_BUDGET = 400

_Z = sympy.Symbol("z_nf")
_C = sympy.Symbol("c_nf")
_field_ids = itertools.count()


def _to_fraction(value) -> Fraction:
    """Fraction from sympy Rational, gmpy2 mpq or PythonMPQ."""
    num = getattr(value, "numerator", None)
    if num is None:
        num, den = value.p, value.q
    else:
        den = value.denominator
    return Fraction(int(num), int(den))


def _trim(coeffs: List[Fraction]) -> List[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _ival_mul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(prods), max(prods))


def _ival_poly(coeffs: Sequence[Fraction], ival) -> Tuple[Fraction, Fraction]:
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _ival_mul(acc, ival)
        acc = (acc[0] + c, acc[1] + c)
    return acc


class NumberField:
    """Q(theta), theta the ``index``-th real root (ascending) of ``minpoly``.

    ``minpoly`` is given low-to-high, monic, irreducible over Q, degree >= 2.
    """

    def __init__(self, minpoly: Sequence[Fraction], index: int):
        mp = [Fraction(c) for c in minpoly]
        lead = mp[-1]
        self.minpoly: Tuple[Fraction, ...] = tuple(c / lead for c in mp)
        self.degree = len(self.minpoly) - 1
        self.index = index
        self.uid = next(_field_ids)
        expr = sum(sympy.Rational(c.numerator, c.denominator) * _Z ** k
                   for k, c in enumerate(self.minpoly))
        self.generator_expr = CRootOf(expr, index)
        ival = self.generator_expr._get_interval()
        self.lo = _to_fraction(ival.a)
        self.hi = _to_fraction(ival.b)
        if self.lo == self.hi:
            raise CoefficientFieldFailure("rational generator passed to NumberField")
        self._sympy = None
        self._theta_sympy = None

    def __repr__(self):
        return f"NumberField(minpoly={[str(c) for c in self.minpoly]}, root={self.index})"

    def key(self):
        return (self.minpoly, self.index)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def refine(self, steps: int = 1):
        """Halve the isolating interval ``steps`` times."""
        for _ in range(steps):
            mid = (self.lo + self.hi) / 2
            v = _poly_eval(self.minpoly, mid)
            if v == 0:  # cannot happen for irreducible degree >= 2
                raise CoefficientFieldFailure("rational root of an irreducible polynomial")
            vlo = _poly_eval(self.minpoly, self.lo)
            if (vlo < 0) == (v < 0) and vlo != 0:
                self.lo = mid
            else:
                self.hi = mid

    @property
    def interval(self):
        return (self.lo, self.hi)

    def approx(self) -> Fraction:
        return (self.lo + self.hi) / 2

    # sympy bridge, only used for factoring and field extension
    @property
    def sympy_domain(self):
        if self._sympy is None:
            self._sympy = QQ.algebraic_field(self.generator_expr)
            self._theta_sympy = self._sympy.from_sympy(self.generator_expr)
        return self._sympy

    def to_anp(self, a: "Coeff"):
        K = self.sympy_domain
        if isinstance(a, Fraction):
            return K.convert(sympy.Rational(a.numerator, a.denominator))
        acc = K.zero
        for c in reversed(a.coeffs):
            acc = acc * self._theta_sympy + K.convert(sympy.Rational(c.numerator, c.denominator))
        return acc

    def from_anp(self, anp) -> "Coeff":
        rep = anp.to_list()
        coeffs = [_to_fraction(c) for c in reversed(rep)]
        return make(self, coeffs)

    def element_expr(self, a: "Coeff"):
        if isinstance(a, Fraction):
            return sympy.Rational(a.numerator, a.denominator)
        return sum(sympy.Rational(c.numerator, c.denominator) * self.generator_expr ** k
                   for k, c in enumerate(a.coeffs))


class Alg:
    """Element of a :class:`NumberField` (never a rational in disguise)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Sequence[Fraction]):
        self.field = field
        self.coeffs = tuple(coeffs)

    def __repr__(self):
        return f"Alg({[str(c) for c in self.coeffs]} in {self.field!r})"

    def __str__(self):
        return f"alg~{float(approx(self)):.6g}"

    def __hash__(self):
        return hash((self.field.key(), self.coeffs))

    def __eq__(self, other):
        return coeff_eq(self, other)

    def __neg__(self):
        return Alg(self.field, [-c for c in self.coeffs])

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, inv(other))

    def __rtruediv__(self, other):
        return mul(other, inv(self))

    def __pow__(self, n: int):
        return power(self, n)


Coeff = Union[Fraction, Alg]


def make(field: NumberField | None, coeffs: Sequence[Fraction]) -> Coeff:
    coeffs = _trim([Fraction(c) for c in coeffs])
    if len(coeffs) <= 1 or field is None:
        if field is None and len(coeffs) > 1:
            raise ValueError("polynomial element without a field")
        return coeffs[0] if coeffs else Fraction(0)
    return Alg(field, coeffs)


def field_of(*values) -> NumberField | None:
    """The common field of the given coefficients (None for rationals)."""
    found = None
    for v in values:
        if isinstance(v, Alg):
            if found is None:
                found = v.field
            elif found is not v.field and found != v.field:
                raise CoefficientFieldFailure("arithmetic between different number fields")
    return found


def _coeff_list(a: Coeff) -> List[Fraction]:
    return list(a.coeffs) if isinstance(a, Alg) else [Fraction(a)]


def _reduce(field: NumberField, coeffs: List[Fraction]) -> List[Fraction]:
    mp = field.minpoly
    d = field.degree
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[k]
        if c:
            for i in range(d + 1):
                coeffs[k - d + i] -= c * mp[i]
    return coeffs[:d]


def neg(a: Coeff) -> Coeff:
    return -a


def add(a: Coeff, b: Coeff) -> Coeff:
    if not isinstance(a, Alg) and not isinstance(b, Alg):
        return Fraction(a) + Fraction(b)
    field = field_of(a, b)
    la, lb = _coeff_list(a), _coeff_list(b)
    n = max(len(la), len(lb))
    la += [Fraction(0)] * (n - len(la))
    lb += [Fraction(0)] * (n - len(lb))
    return make(field, [x + y for x, y in zip(la, lb)])


def mul(a: Coeff, b: Coeff) -> Coeff:
    if not isinstance(a, Alg) and not isinstance(b, Alg):
        return Fraction(a) * Fraction(b)
    field = field_of(a, b)
    la, lb = _coeff_list(a), _coeff_list(b)
    prod = [Fraction(0)] * (len(la) + len(lb) - 1)
    for i, x in enumerate(la):
        if x:
            for j, y in enumerate(lb):
                prod[i + j] += x * y
    return make(field, _reduce(field, prod))


def inv(a: Coeff) -> Coeff:
    if not isinstance(a, Alg):
        a = Fraction(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a
    field = a.field
    # extended Euclid in Q[t]: find u with u*a = 1 mod minpoly
    r0, r1 = list(field.minpoly), list(a.coeffs)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(_trim(list(r1))) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    r1 = _trim(list(r1))
    if not r1:
        raise ZeroDivisionError("inverse of zero in number field")
    scale = 1 / r1[0]
    return make(field, _reduce(field, [c * scale for c in s1]))


def power(a: Coeff, n: int) -> Coeff:
    if n < 0:
        return power(inv(a), -n)
    result: Coeff = Fraction(1)
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _poly_sub(p, q):
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    return [x - y for x, y in zip(p, q)]


def _poly_divmod(num, den):
    num = _trim(list(num))
    den = _trim(list(den))
    if len(num) < len(den):
        return [Fraction(0)], num
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    rem = list(num)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = rem[k + len(den) - 1] / lead
        quot[k] = c
        if c:
            for i, d in enumerate(den):
                rem[k + i] -= c * d
    return quot, _trim(rem[: len(den) - 1]) or [Fraction(0)]


def is_zero(a: Coeff) -> bool:
    if isinstance(a, Alg):
        return not any(a.coeffs)
    return a == 0


def interval(a: Coeff) -> Tuple[Fraction, Fraction]:
    if isinstance(a, Alg):
        return _ival_poly(a.coeffs, a.field.interval)
    a = Fraction(a)
    return (a, a)


def approx(a: Coeff) -> Fraction:
    lo, hi = interval(a)
    return (lo + hi) / 2


def sign(a: Coeff, budget: int | None = None) -> int:
    """Exact sign of a coefficient (-1, 0 or +1)."""
    if not isinstance(a, Alg):
        a = Fraction(a)
        return (a > 0) - (a < 0)
    if is_zero(a):
        return 0
    budget = REFINEMENT_BUDGET if budget is None else budget
    for _ in range(budget + 1):
        lo, hi = interval(a)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        a.field.refine()
    raise CoefficientFieldFailure(f"sign of {a!r} undecided after {budget} refinements")


def compare(a: Coeff, b: Coeff) -> int:
    """Exact comparison of two coefficients, possibly from different fields."""
    fa = a.field if isinstance(a, Alg) else None
    fb = b.field if isinstance(b, Alg) else None
    if fa is None or fb is None or fa == fb:
        if fa is not None and fb is not None and fa is not fb:
            b = Alg(fa, b.coeffs)
        return sign(add(a, neg(b)))
    return _compare_across(a, b)


def coeff_eq(a, b) -> bool:
    if not isinstance(a, (Alg, Fraction, int)) or not isinstance(b, (Alg, Fraction, int)):
        return False
    if isinstance(a, int):
        a = Fraction(a)
    if isinstance(b, int):
        b = Fraction(b)
    return compare(a, b) == 0


def _separated(a, b):
    la, ha = interval(a)
    lb, hb = interval(b)
    if ha < lb:
        return -1
    if hb < la:
        return 1
    return 0


def _compare_across(a: Alg, b: Alg) -> int:
    for _ in range(40):
        s = _separated(a, b)
        if s:
            return s
        a.field.refine()
        b.field.refine()
    ma = _defining_poly(a)
    mb = _defining_poly(b)
    g = sympy.gcd(ma, mb)
    if g.degree() <= 0:
        return _separate_or_fail(a, b)
    h = sympy.Poly(ma * mb, _Z).sqf_part()
    for _ in range(REFINEMENT_BUDGET):
        la, ha = interval(a)
        lb, hb = interval(b)
        if _count_roots(h, la, ha) == 1 and _count_roots(h, lb, hb) == 1:
            lo, hi = max(la, lb), min(ha, hb)
            if lo <= hi and _count_roots(h, lo, hi) == 1:
                return 0
            return _separate_or_fail(a, b)
        a.field.refine()
        b.field.refine()
    raise CoefficientFieldFailure("could not isolate algebraic coefficients for comparison")


def _separate_or_fail(a, b):
    for _ in range(REFINEMENT_BUDGET):
        s = _separated(a, b)
        if s:
            return s
        a.field.refine()
        b.field.refine()
    raise CoefficientFieldFailure("distinct algebraic coefficients not separated within budget")


def _count_roots(poly, lo: Fraction, hi: Fraction) -> int:
    return poly.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                            sympy.Rational(hi.numerator, hi.denominator))


def _defining_poly(a: Alg):
    """A squarefree rational polynomial in z_nf having ``a`` as a root."""
    return _defining_poly_cached(a.field.minpoly, a.coeffs)


@lru_cache(maxsize=4096)
def _defining_poly_cached(minpoly, coeffs):
    t = sympy.Symbol("t_nf")
    m = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(minpoly))
    e = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(coeffs))
    res = sympy.resultant(m, _Z - e, t)
    return sympy.Poly(res, _Z).sqf_part()


# ---------------------------------------------------------------------------
# real roots of univariate polynomials over Q or a number field


def real_roots(coeffs: Sequence[Coeff]) -> Tuple[List[Tuple[Coeff, int]], int]:
    """Real roots (with multiplicity) of sum coeffs[k] c^k, plus the number of
    non-real roots counted with multiplicity.

    Roots are returned ascending.  A root outside the coefficient field lives
    in a freshly built extension.
    """
    coeffs = [c if isinstance(c, Alg) else Fraction(c) for c in coeffs]
    while coeffs and is_zero(coeffs[-1]):
        coeffs.pop()
    degree = len(coeffs) - 1
    if degree < 1:
        return [], 0
    field = field_of(*coeffs)
    if field is None:
        found = _real_roots_rational(coeffs)
    else:
        found = _real_roots_over(field, coeffs)
    found.sort(key=_RootKey)
    n_real = sum(m for _, m in found)
    return found, degree - n_real


class _RootKey:
    def __init__(self, item):
        self.value = item[0]

    def __lt__(self, other):
        return compare(self.value, other.value) < 0


def _real_roots_rational(coeffs) -> List[Tuple[Coeff, int]]:
    expr = sum(sympy.Rational(c.numerator, c.denominator) * _C ** k for k, c in enumerate(coeffs))
    _, factors = Poly(expr, _C, domain=QQ).factor_list()
    out = []
    for fac, mult in factors:
        lst = [_to_fraction(c) for c in reversed(fac.all_coeffs())]
        if fac.degree() == 1:
            out.append((-lst[0] / lst[1], mult))
            continue
        nreal = fac.count_roots()
        for idx in range(nreal):
            field = NumberField(lst, idx)
            out.append((Alg(field, [Fraction(0), Fraction(1)]), mult))
    return out


def _real_roots_over(field: NumberField, coeffs) -> List[Tuple[Coeff, int]]:
    K = field.sympy_domain
    poly = Poly.from_list([field.to_anp(c) for c in reversed(coeffs)], _C, domain=K)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fc = fac.rep.to_list()
        if fac.degree() == 1:
            root = field.from_anp(-fc[1] / fc[0])
            out.append((root, mult))
            continue
        for root in _extension_roots(field, fac):
            out.append((root, mult))
    return out


def _extension_roots(field: NumberField, fac) -> List[Alg]:
    """Real roots of an irreducible factor over ``field`` of degree >= 2."""
    norm = fac.norm()
    _, nfactors = norm.factor_list()
    roots = []
    theta = field.generator_expr
    for nf, _ in nfactors:
        nexpr = nf.as_expr().subs(_C, _Z)
        for idx in range(Poly(nexpr, _Z).count_roots()):
            r = CRootOf(nexpr, idx)
            L = QQ.algebraic_field(theta, r)
            theta_L = L.from_sympy(theta)
            r_L = L.from_sympy(r)
            acc = L.zero
            for c in fac.rep.to_list():
                acc = acc * r_L + _anp_to_ext(field, c, theta_L, L)
            if acc != L.zero:
                continue
            roots.append(_rebase(L, r_L, field, theta_L))
    return roots


def _anp_to_ext(field, c, theta_L, L):
    rep = c.to_list()
    acc = L.zero
    for k in rep:
        acc = acc * theta_L + L.convert(k)
    return acc


class FieldEmbedding:
    """Records how an old field sits inside a new one (theta_old as element)."""

    def __init__(self, old: NumberField, new: NumberField, theta_old: Coeff):
        self.old = old
        self.new = new
        self.theta_old = theta_old

    def __call__(self, a: Coeff) -> Coeff:
        if not isinstance(a, Alg):
            return a
        if a.field is self.new:
            return a
        if a.field != self.old:
            raise CoefficientFieldFailure("embedding applied to a foreign field element")
        acc: Coeff = Fraction(0)
        for c in reversed(a.coeffs):
            acc = add(mul(acc, self.theta_old), c)
        return acc


class ExtensionRoot(Alg):
    """A root living in an extension field; ``embedding`` maps old coefficients."""

    __slots__ = ("embedding",)


def _rebase(L, r_L, old_field: NumberField, theta_L) -> Alg:
    mod = [_to_fraction(c) for c in reversed(L.mod.to_list())]
    value = sympy.N(L.ext.root, 60)
    mod_expr = sum(sympy.Rational(c.numerator, c.denominator) * _Z ** k for k, c in enumerate(mod))
    mpoly = Poly(mod_expr, _Z)
    n = mpoly.count_roots()
    target = Fraction(str(sympy.Float(value, 60)))
    best = None
    for idx in range(n):
        cand = NumberField(mod, idx)
        while cand.hi - cand.lo > Fraction(1, 10 ** 40):
            cand.refine()
        if cand.lo - Fraction(1, 10 ** 45) <= target <= cand.hi + Fraction(1, 10 ** 45):
            if best is not None:
                raise CoefficientFieldFailure("ambiguous primitive element identification")
            best = cand
    if best is None:
        raise CoefficientFieldFailure("primitive element is not a real root of its minimal polynomial")
    new = NumberField(mod, best.index)
    root = ExtensionRoot(new, new.from_anp(r_L).coeffs if isinstance(new.from_anp(r_L), Alg)
                         else [new.from_anp(r_L)])
    root.embedding = FieldEmbedding(old_field, new, new.from_anp(theta_L))
    return root
