"""Exact multivariate polynomial algebra, linear forms, and residues.

All coefficients are `fractions.Fraction`; no floating point is used
anywhere in this package.  Polynomials are sparse maps from exponent
tuples to nonzero coefficients.  Whenever terms must be listed
canonically they are sorted in graded-lexicographic order (total degree
first, then the exponent tuple), largest first.

A covector is a linear functional on the acting torus's Lie algebra,
written in coordinates; a vector lives in the algebra itself.  A
``LinearForm`` couples a nonzero covector with its canonical primitive
integer representative (first nonzero coordinate positive), which is how
parallelism of denominators is detected exactly.

The residue of ``f / prod(alpha_i)`` along a direction ``xi`` is
implemented twice, by a truncated geometric-series expansion and by a
partial-fraction formula; the two routes share no code and are checked
against each other in the test suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg

Monomial = tuple[int, ...]


class NonPolynomialResultError(ArithmeticError):
    """A localized sum that had to be polynomial failed to simplify to one."""

    def __init__(self, message: str, numerator=None, denominators=None):
        super().__init__(message)
        self.numerator = numerator
        self.denominators = denominators


def as_fraction(value: int | str | Fraction) -> Fraction:
    """Parse an exact rational; floats are rejected to keep arithmetic exact."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational required, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"exact rational required, got {value!r}")


def grlex_key(exp: Monomial) -> tuple[int, Monomial]:
    return (sum(exp), exp)


class _Coords:
    """Immutable tuple of exact rational coordinates with linear arithmetic."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[int | str | Fraction]):
        self.coords = tuple(as_fraction(c) for c in coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coords))

    def __add__(self, other):
        self._check(other)
        return type(self)(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        self._check(other)
        return type(self)(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return type(self)(-a for a in self.coords)

    def scaled(self, q: int | Fraction) -> "_Coords":
        q = as_fraction(q)
        return type(self)(q * a for a in self.coords)

    def _check(self, other) -> None:
        if type(self) is not type(other) or self.n != other.n:
            raise TypeError("mismatched coordinate tuples")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(str(c) for c in self.coords)})"


class Covector(_Coords):
    """Element of the dual of the torus Lie algebra, in coordinates."""


class Vector(_Coords):
    """Element of the torus Lie algebra, in coordinates."""


def pair(cov: Covector, vec: Vector) -> Fraction:
    """Natural pairing <covector, vector>."""
    if cov.n != vec.n:
        raise TypeError("dimension mismatch in pairing")
    return sum((a * b for a, b in zip(cov.coords, vec.coords)), Fraction(0))


class Polynomial:
    """Sparse exact polynomial in ``n`` variables.

    The term map never stores zero coefficients, so structural equality is
    mathematical equality.  Instances are immutable by convention; all
    operations return new objects.
    """

    __slots__ = ("n", "_terms")

    def __init__(
        self,
        n: int,
        terms: Mapping[Monomial, int | str | Fraction]
        | Iterable[tuple[Monomial, int | str | Fraction]]
        | None = None,
    ):
        self.n = int(n)
        if self.n < 0:
            raise ValueError("variable count must be nonnegative")
        acc: dict[Monomial, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exp, coef in items:
                key = tuple(int(e) for e in exp)
                if len(key) != self.n or any(e < 0 for e in key):
                    raise ValueError(f"bad exponent tuple {key!r} for n={self.n}")
                q = as_fraction(coef)
                if q:
                    prev = acc.get(key)
                    total = q if prev is None else prev + q
                    if total:
                        acc[key] = total
                    elif prev is not None:
                        del acc[key]
        self._terms = acc

    # --- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c: int | str | Fraction) -> "Polynomial":
        return cls(n, {(0,) * n: as_fraction(c)})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        if not 0 <= i < n:
            raise ValueError("variable index out of range")
        exp = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, {exp: 1})

    @classmethod
    def from_covector(cls, cov: Covector) -> "Polynomial":
        n = cov.n
        terms = {}
        for i, c in enumerate(cov.coords):
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return cls(n, terms)

    # --- inspection ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical (graded-lex, largest first) order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coefficient(self, exp: Monomial) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self._terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int | None:
        """Common total degree of a homogeneous polynomial.

        Returns None for the zero polynomial (homogeneous of every degree)
        and raises ValueError if the terms mix degrees.
        """
        degs = {sum(e) for e in self._terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def max_exponent(self, j: int) -> int:
        if not self._terms:
            return 0
        return max((e[j] for e in self._terms), default=0)

    # --- arithmetic ---------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial) or other.n != self.n:
            raise TypeError("mismatched polynomial rings")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self._terms == other._terms
        )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for exp, q in other._terms.items():
            total = out.get(exp, Fraction(0)) + q
            if total:
                out[exp] = total
            elif exp in out:
                del out[exp]
        return self._raw(self.n, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for exp, q in other._terms.items():
            total = out.get(exp, Fraction(0)) - q
            if total:
                out[exp] = total
            elif exp in out:
                del out[exp]
        return self._raw(self.n, out)

    def __neg__(self) -> "Polynomial":
        return self._raw(self.n, {e: -q for e, q in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for e1, q1 in self._terms.items():
            for e2, q2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                total = out.get(key, Fraction(0)) + q1 * q2
                if total:
                    out[key] = total
                elif key in out:
                    del out[key]
        return self._raw(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def scaled(self, q: int | Fraction) -> "Polynomial":
        q = as_fraction(q)
        if not q:
            return Polynomial.zero(self.n)
        return self._raw(self.n, {e: q * c for e, c in self._terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    @classmethod
    def _raw(cls, n: int, terms: dict[Monomial, Fraction]) -> "Polynomial":
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        return p

    # --- structure ----------------------------------------------------

    def split_by_variable(self, j: int) -> dict[int, "Polynomial"]:
        """Write self = sum_r x_j^r * part[r] with x_j absent from each part."""
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for exp, q in self._terms.items():
            r = exp[j]
            stripped = exp[:j] + (0,) + exp[j + 1 :]
            parts.setdefault(r, {})[stripped] = q
        return {r: self._raw(self.n, t) for r, t in parts.items()}

    def substitute(self, images: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Ring morphism sending x_i to images[i] (default: itself)."""
        for img in images.values():
            if img.n != self.n:
                raise ValueError("substitution images must live in the same ring")
        power_cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            got = power_cache.get(key)
            if got is None:
                got = images[i] ** e if i in images else None
                if got is None:
                    exp = tuple(e if j == i else 0 for j in range(self.n))
                    got = self._raw(self.n, {exp: Fraction(1)})
                power_cache[key] = got
            return got

        out = Polynomial.zero(self.n)
        for exp, q in self._terms.items():
            term = Polynomial.constant(self.n, q)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Sequence[int | Fraction]) -> Fraction:
        if len(point) != self.n:
            raise ValueError("evaluation point has wrong dimension")
        pt = [as_fraction(c) for c in point]
        total = Fraction(0)
        for exp, q in self._terms.items():
            val = q
            for c, e in zip(pt, exp):
                if e:
                    val *= c**e
            total += val
        return total

    # --- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(exp), "coef": str(coef)} for exp, coef in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Polynomial":
        if not isinstance(obj, Mapping) or "n" not in obj or "terms" not in obj:
            raise ValueError("polynomial object needs 'n' and 'terms'")
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ValueError("'n' must be a nonnegative integer")
        terms = []
        for entry in obj["terms"]:
            if not isinstance(entry, Mapping) or "exp" not in entry or "coef" not in entry:
                raise ValueError("each term needs 'exp' and 'coef'")
            exp = entry["exp"]
            if not isinstance(exp, (list, tuple)) or any(
                not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exp
            ):
                raise ValueError(f"bad exponent list {exp!r}")
            terms.append((tuple(exp), as_fraction(entry["coef"])))
        return cls(n, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for exp, q in self.terms():
            mono = "*".join(
                f"x{i}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            if mono:
                bits.append(f"{q}*{mono}" if q != 1 else mono)
            else:
                bits.append(str(q))
        return " + ".join(bits)


class LinearForm:
    """A nonzero covector together with its canonical primitive representative.

    Two forms are parallel exactly when their canonical integer tuples agree,
    and ``covector == scale * canonical``.
    """

    __slots__ = ("covector", "canonical", "scale")

    def __init__(self, covector: Covector | Iterable):
        if not isinstance(covector, Covector):
            covector = Covector(covector)
        if covector.is_zero():
            raise ValueError("linear form must be nonzero")
        self.covector = covector
        den = 1
        for c in covector.coords:
            den = math.lcm(den, c.denominator)
        ints = [int(c * den) for c in covector.coords]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        first = next(v for v in ints if v)
        if first < 0:
            ints = [-v for v in ints]
        self.canonical = tuple(ints)
        i0 = next(i for i, v in enumerate(ints) if v)
        self.scale = covector.coords[i0] / ints[i0]

    @property
    def n(self) -> int:
        return self.covector.n

    def parallel_to(self, other: "LinearForm") -> bool:
        return self.canonical == other.canonical

    def polynomial(self) -> Polynomial:
        return Polynomial.from_covector(self.covector)

    def canonical_covector(self) -> Covector:
        return Covector(self.canonical)

    def canonical_polynomial(self) -> Polynomial:
        return Polynomial.from_covector(self.canonical_covector())

    def evaluate(self, vec: Vector) -> Fraction:
        return pair(self.covector, vec)

    def pivot(self) -> int:
        """Highest-index variable with nonzero canonical coefficient."""
        return max(i for i, v in enumerate(self.canonical) if v)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self.covector == other.covector

    def __hash__(self) -> int:
        return hash(self.covector)

    def __repr__(self) -> str:
        return f"LinearForm({self.covector!r})"


def graded_dim(n: int, k: int) -> int:
    """Dimension of the degree-k piece of a polynomial ring in n variables."""
    if n < 1:
        raise ValueError("need at least one variable")
    if k < 0:
        return 0
    return math.comb(k + n - 1, n - 1)


def monomials(n: int, k: int) -> list[Monomial]:
    """All exponent tuples of total degree k, in canonical order."""
    if k < 0:
        return []
    out: list[Monomial] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), k, n)
    out.sort(key=grlex_key, reverse=True)
    return out


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Dispatch add/sub/mul; the operators on Polynomial do the work."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def reduce_mod_line(f: Polynomial, form: LinearForm) -> Polynomial:
    """Canonical normal form of f modulo the ideal generated by the form.

    The pivot variable (highest-index nonzero canonical coordinate) is
    eliminated by solving the form for it, so the result mentions only the
    remaining variables.  This realizes restriction to the form's kernel.
    """
    if f.n != form.n:
        raise ValueError("ring dimension mismatch")
    j = form.pivot()
    c = form.canonical
    rep_terms = {}
    for i, ci in enumerate(c):
        if i != j and ci:
            exp = tuple(1 if t == i else 0 for t in range(f.n))
            rep_terms[exp] = Fraction(-ci, c[j])
    rep = Polynomial(f.n, rep_terms)
    parts = f.split_by_variable(j)
    out = Polynomial.zero(f.n)
    power = Polynomial.constant(f.n, 1)
    for r in range(max(parts) + 1 if parts else 0):
        if r:
            power = power * rep
        part = parts.get(r)
        if part is not None:
            out = out + part * power
    return out


def divides_exactly(form: LinearForm, f: Polynomial) -> Polynomial | None:
    """Quotient f / form when the division is exact, else None."""
    if f.n != form.n:
        raise ValueError("ring dimension mismatch")
    if f.is_zero():
        return Polynomial.zero(f.n)
    j = form.pivot()
    cj = Fraction(form.canonical[j])
    line = form.canonical_polynomial()
    quotient = Polynomial.zero(f.n)
    remainder = f
    while True:
        parts = remainder.split_by_variable(j)
        top = max(parts) if parts else 0
        if top == 0:
            break
        lead = parts[top]
        exp = tuple(top - 1 if t == j else 0 for t in range(f.n))
        shift = Polynomial(f.n, {exp: 1})
        piece = lead.scaled(1 / cj) * shift
        quotient = quotient + piece
        remainder = remainder - line * piece
    if not remainder.is_zero():
        return None
    return quotient.scaled(1 / form.scale)


def project_along(f: Polynomial, form: LinearForm, xi: Vector) -> Polynomial:
    """Push f into the subring annihilating xi using the form's direction.

    Every generator beta goes to beta - (beta(xi)/form(xi)) * form, which is
    the identification of the form's kernel functions with functions on the
    annihilator of xi.  Requires form(xi) != 0.
    """
    m = form.evaluate(xi)
    if m == 0:
        raise ValueError("form vanishes on xi; projection undefined")
    alpha = form.polynomial()
    images = {}
    for k in range(f.n):
        xk = Polynomial.variable(f.n, k)
        coef = xi.coords[k] / m
        if coef:
            images[k] = xk - alpha.scaled(coef)
    return f.substitute(images)


@dataclass(frozen=True)
class LocalizedTerm:
    """numerator / product(denominators), denominators nonzero linear forms."""

    numerator: Polynomial
    denominators: tuple[LinearForm, ...]

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        val = self.numerator.evaluate(point)
        for form in self.denominators:
            d = form.polynomial().evaluate(point)
            if d == 0:
                raise ZeroDivisionError("denominator vanishes at the point")
            val /= d
        return val


@dataclass(frozen=True)
class LocalizedSum:
    """Finite sum of localized terms in a fixed polynomial ring."""

    n: int
    terms: tuple[LocalizedTerm, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.numerator.n != self.n or any(d.n != self.n for d in t.denominators):
                raise ValueError("localized term in the wrong ring")

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        return sum((t.evaluate(point) for t in self.terms), Fraction(0))


def simplify(lsum: LocalizedSum) -> tuple[Polynomial, tuple[LinearForm, ...]]:
    """Collapse a localized sum to one fraction in lowest terms.

    Parallel denominator factors are merged into canonical representatives
    (scalars absorbed into numerators); after clearing to the least common
    denominator, canonical factors are cancelled while they divide the
    numerator exactly.  The returned denominator multiset is sorted and
    consists of canonical forms only.
    """
    n = lsum.n
    cleaned: list[tuple[Polynomial, dict[Monomial, int]]] = []
    canon_forms: dict[Monomial, LinearForm] = {}
    for term in lsum.terms:
        if term.numerator.is_zero():
            continue
        num = term.numerator
        mult: dict[Monomial, int] = {}
        scale = Fraction(1)
        for form in term.denominators:
            key = form.canonical
            canon_forms.setdefault(key, LinearForm(Covector(key)))
            mult[key] = mult.get(key, 0) + 1
            scale *= form.scale
        cleaned.append((num.scaled(1 / scale), mult))
    if not cleaned:
        return Polynomial.zero(n), ()
    lcd: dict[Monomial, int] = {}
    for _, mult in cleaned:
        for key, m in mult.items():
            lcd[key] = max(lcd.get(key, 0), m)
    numerator = Polynomial.zero(n)
    for num, mult in cleaned:
        piece = num
        for key, m in lcd.items():
            extra = m - mult.get(key, 0)
            for _ in range(extra):
                piece = piece * canon_forms[key].canonical_polynomial()
        numerator = numerator + piece
    remaining: dict[Monomial, int] = {k: m for k, m in lcd.items() if m}
    for key in sorted(remaining):
        form = canon_forms[key]
        while remaining[key] > 0 and not numerator.is_zero():
            q = divides_exactly(form, numerator)
            if q is None:
                break
            numerator = q
            remaining[key] -= 1
    if numerator.is_zero():
        return Polynomial.zero(n), ()
    denoms: list[LinearForm] = []
    for key in sorted(remaining):
        denoms.extend(canon_forms[key] for _ in range(remaining[key]))
    return numerator, tuple(denoms)


# --- residues ----------------------------------------------------------


def _coerce_forms(alphas: Sequence[LinearForm | Covector | Iterable]) -> list[LinearForm]:
    out = []
    for a in alphas:
        out.append(a if isinstance(a, LinearForm) else LinearForm(a))
    return out


def _canonical_residue_basis(xi: Vector) -> tuple[Covector, list[Covector]]:
    """Complement basis for the annihilator of xi.

    x is the scaled coordinate covector with x(xi) = 1 at the first index
    where xi is nonzero; the y's are the remaining coordinate covectors
    corrected to kill xi.
    """
    j = next((i for i, c in enumerate(xi.coords) if c), None)
    if j is None:
        raise ValueError("xi must be nonzero")
    n = xi.n
    x = Covector(tuple(Fraction(1, 1) / xi.coords[j] if i == j else Fraction(0) for i in range(n)))
    ys = []
    for k in range(n):
        if k == j:
            continue
        ek = Covector(tuple(Fraction(int(i == k)) for i in range(n)))
        ys.append(ek - x.scaled(xi.coords[k]))
    return x, ys


def _validate_residue_basis(xi: Vector, basis: tuple[Covector, Sequence[Covector]]):
    x, ys = basis
    if pair(x, xi) != 1:
        raise ValueError("basis covector x must satisfy x(xi) = 1")
    for y in ys:
        if pair(y, xi) != 0:
            raise ValueError("complement covectors must annihilate xi")
    rows = [list(x.coords)] + [list(y.coords) for y in ys]
    if len(rows) != xi.n or linalg.rank(rows, xi.n) != xi.n:
        raise ValueError("residue basis must span the dual space")
    return x, list(ys)


def _residue_series(
    f: Polynomial,
    forms: Sequence[LinearForm],
    xi: Vector,
    basis: tuple[Covector, Sequence[Covector]] | None = None,
) -> Polynomial:
    """Coefficient of 1/x in the geometric-series expansion of f / prod(alpha).

    Works in internal coordinates where slot 0 is x and slots 1..n-1 are a
    basis of the annihilator of xi; the result is re-expanded into ambient
    coordinates, where it lies in the subring of functions killed by xi.
    """
    n = f.n
    if basis is None:
        x, ys = _canonical_residue_basis(xi)
    else:
        x, ys = _validate_residue_basis(xi, basis)
    cols = [x] + ys
    matrix = [[cols[b].coords[i] for b in range(n)] for i in range(n)]
    inverse = linalg.invert(matrix)
    if inverse is None:
        raise ValueError("residue basis is singular")

    # coordinates of ambient e_k* in the (x, y) basis are column k of M^{-1}
    images = {}
    for k in range(n):
        terms = {}
        for b in range(n):
            c = inverse[b][k]
            if c:
                terms[tuple(1 if t == b else 0 for t in range(n))] = c
        images[k] = Polynomial(n, terms)
    F = f.substitute(images)

    d = len(forms)
    ms = []
    betas = []
    for form in forms:
        alpha = form.covector
        m = pair(alpha, xi)
        coords = [
            sum((inverse[b][k] * alpha.coords[k] for k in range(n)), Fraction(0))
            for b in range(n)
        ]
        ms.append(m)
        beta_terms = {}
        for b in range(1, n):
            if coords[b]:
                beta_terms[tuple(1 if t == b else 0 for t in range(n))] = -coords[b] / m
        betas.append(Polynomial(n, beta_terms))

    parts = F.split_by_variable(0)
    top = max(parts) if parts else 0
    mmax = top - d + 1
    if mmax < 0:
        return Polynomial.zero(n)
    series = [Polynomial.constant(n, 1)] + [Polynomial.zero(n)] * mmax
    for beta in betas:
        powers = [Polynomial.constant(n, 1)]
        for _ in range(mmax):
            powers.append(powers[-1] * beta)
        new = [Polynomial.zero(n) for _ in range(mmax + 1)]
        for a in range(mmax + 1):
            if series[a].is_zero():
                continue
            for b in range(mmax + 1 - a):
                new[a + b] = new[a + b] + series[a] * powers[b]
        series = new
    result = Polynomial.zero(n)
    for r, part in parts.items():
        m = r - d + 1
        if 0 <= m <= mmax:
            result = result + part * series[m]
    scale = Fraction(1)
    for m in ms:
        scale /= m
    result = result.scaled(scale)

    # back to ambient coordinates: slot 0 never survives, slots >= 1 expand
    back = {0: Polynomial.zero(n)}
    for b in range(1, n):
        back[b] = Polynomial.from_covector(ys[b - 1])
    return result.substitute(back)


def _residue_formula(
    f: Polynomial, forms: Sequence[LinearForm], xi: Vector
) -> Polynomial:
    """Partial-fraction route: sum over i of K_i(f) / (m_i prod alpha#_{j,i}).

    Requires the forms to be pairwise linearly independent, which makes all
    the projected denominators alpha#_{j,i} nonzero.
    """
    n = f.n
    for i, j in itertools.combinations(range(len(forms)), 2):
        if forms[i].parallel_to(forms[j]):
            raise ValueError("formula method needs pairwise independent forms")
    terms = []
    for i, fi in enumerate(forms):
        m_i = fi.evaluate(xi)
        ki = project_along(f, fi, xi)
        dens = []
        for j, fj in enumerate(forms):
            if j == i:
                continue
            sharp = fj.covector - fi.covector.scaled(fj.evaluate(xi) / m_i)
            dens.append(LinearForm(sharp))
        terms.append(LocalizedTerm(ki.scaled(1 / m_i), tuple(dens)))
    numerator, denominators = simplify(LocalizedSum(n, tuple(terms)))
    if denominators:
        raise NonPolynomialResultError(
            "residue formula did not collapse to a polynomial",
            numerator,
            denominators,
        )
    return numerator


def residue(
    f: Polynomial,
    alphas: Sequence[LinearForm | Covector | Iterable],
    xi: Vector,
    method: str = "series",
    basis: tuple[Covector, Sequence[Covector]] | None = None,
) -> Polynomial:
    """Residue of f / prod(alpha_i) along xi, as an ambient polynomial.

    The result lies in the subring of polynomials in covectors annihilating
    xi and is independent of the internal complement-basis choice.  Every
    alpha_i must be nonzero on xi.
    """
    forms = _coerce_forms(alphas)
    if f.n != xi.n or any(form.n != xi.n for form in forms):
        raise ValueError("dimension mismatch")
    for idx, form in enumerate(forms):
        if form.evaluate(xi) == 0:
            raise ValueError(f"denominator {idx} vanishes on xi")
    if method == "series":
        return _residue_series(f, forms, xi, basis)
    if method == "formula":
        return _residue_formula(f, forms, xi)
    raise ValueError(f"unknown residue method {method!r}")


def residue_partial_fractions(
    f_coeffs: Sequence[Polynomial | int | str | Fraction],
    zs: Sequence[Polynomial | int | str | Fraction],
) -> Polynomial | Fraction:
    """Residue of f(x) / prod(x - z_i) via evaluation at the z's.

    ``f_coeffs`` lists the coefficients of f by ascending power of x; the
    z's must be pairwise distinct ring elements whose pairwise differences
    are either all constants or all homogeneous linear forms.
    """
    polys = [c for c in list(f_coeffs) + list(zs) if isinstance(c, Polynomial)]
    if polys:
        n = polys[0].n
        lift = lambda v: v if isinstance(v, Polynomial) else Polynomial.constant(n, v)
        coeffs = [lift(c) for c in f_coeffs]
        zvals = [lift(z) for z in zs]
    else:
        coeffs = [as_fraction(c) for c in f_coeffs]
        zvals = [as_fraction(z) for z in zs]

    def feval(z):
        total = None
        for r, c in enumerate(coeffs):
            piece = c * z**r if r else c
            total = piece if total is None else total + piece
        if total is None:
            return zvals[0] * 0
        return total

    diffs = {}
    for i, j in itertools.combinations(range(len(zvals)), 2):
        d = zvals[i] - zvals[j]
        if (isinstance(d, Polynomial) and d.is_zero()) or (
            not isinstance(d, Polynomial) and d == 0
        ):
            raise ValueError(f"z values {i} and {j} coincide")
        diffs[(i, j)] = d

    if not polys:
        total = Fraction(0)
        for i, zi in enumerate(zvals):
            den = Fraction(1)
            for j, zj in enumerate(zvals):
                if j != i:
                    den *= zi - zj
            total += feval(zi) / den
        return total

    degrees = set()
    for d in diffs.values():
        if not d.is_homogeneous():
            raise ValueError("z differences must be constant or homogeneous linear")
        degrees.add(d.total_degree())
    if degrees <= {0}:
        total = Polynomial.zero(n)
        for i, zi in enumerate(zvals):
            den = Fraction(1)
            for j, zj in enumerate(zvals):
                if j != i:
                    den *= (zi - zj).coefficient((0,) * n)
            total = total + feval(zi).scaled(1 / den)
        return total
    if degrees != {1}:
        raise ValueError("z differences must be constant or homogeneous linear")
    terms = []
    for i, zi in enumerate(zvals):
        dens = []
        for j in range(len(zvals)):
            if j == i:
                continue
            d = zvals[i] - zvals[j]
            cov = Covector(tuple(d.coefficient(tuple(1 if t == b else 0 for t in range(n))) for b in range(n)))
            dens.append(LinearForm(cov))
        terms.append(LocalizedTerm(feval(zi), tuple(dens)))
    numerator, denominators = simplify(LocalizedSum(n, tuple(terms)))
    if denominators:
        raise NonPolynomialResultError(
            "partial-fraction residue was not polynomial", numerator, denominators
        )
    return numerator


def is_polynomial_via_residues(
    lsum: LocalizedSum, xi: Vector, theta: Covector, max_power: int
) -> bool:
    """Polynomiality test: all residues of theta^k * sum vanish, k <= max_power.

    Requires theta(xi) = 1, theta not parallel to any denominator factor, and
    max_power at least the number of distinct denominator parallel classes
    (the Vandermonde bound that makes the test conclusive).
    """
    if pair(theta, xi) != 1:
        raise ValueError("theta must satisfy theta(xi) = 1")
    classes = set()
    for term in lsum.terms:
        for form in term.denominators:
            classes.add(form.canonical)
    theta_form = LinearForm(theta)
    if theta_form.canonical in classes:
        raise ValueError("theta must not be parallel to a denominator factor")
    if max_power < len(classes):
        raise ValueError(
            f"max_power {max_power} below the number of denominator classes {len(classes)}"
        )
    theta_poly = Polynomial.from_covector(theta)
    power = Polynomial.constant(lsum.n, 1)
    for k in range(max_power + 1):
        if k:
            power = power * theta_poly
        total = Polynomial.zero(lsum.n)
        for term in lsum.terms:
            total = total + _residue_series(
                term.numerator * power, list(term.denominators), xi
            )
        if not total.is_zero():
            return False
    return True
