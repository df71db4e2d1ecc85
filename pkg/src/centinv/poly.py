"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from monomials to nonzero coefficients.  Monomials
are packed into a single integer, 16 bits of exponent per variable, so
that monomial multiplication is integer addition.  The zero polynomial
has an empty term map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

_WIDTH = 16
_MASK = (1 << _WIDTH) - 1
_MAX_EXP = 1 << (_WIDTH - 1)

_INDEX_CACHE: dict[tuple[str, ...], dict[str, int]] = {}


class VariableMismatchError(ValueError):
    """Raised for unknown variables or incompatible variable sets."""


def _index_map(variables: tuple[str, ...]) -> dict[str, int]:
    m = _INDEX_CACHE.get(variables)
    if m is None:
        m = {name: i for i, name in enumerate(variables)}
        if len(m) != len(variables):
            raise VariableMismatchError("duplicate variable names")
        _INDEX_CACHE[variables] = m
    return m


def _key_degree(key: int) -> int:
    deg = 0
    while key:
        deg += key & _MASK
        key >>= _WIDTH
    return deg


class SparsePoly:
    """Immutable sparse polynomial over an ordered variable tuple."""

    __slots__ = ("variables", "terms", "_deg", "_factors")

    def __init__(self, variables: Sequence[str], terms: Mapping[int, Fraction] | None = None):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "terms", dict(terms) if terms else {})
        object.__setattr__(self, "_deg", None)
        object.__setattr__(self, "_factors", None)
        _index_map(self.variables)

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("SparsePoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "SparsePoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "SparsePoly":
        c = Fraction(value)
        return cls(variables, {0: c} if c else {})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "SparsePoly":
        idx = _index_map(tuple(variables)).get(name)
        if idx is None:
            raise VariableMismatchError(f"unknown variable {name!r}")
        return cls(variables, {1 << (_WIDTH * idx): Fraction(1)})

    @classmethod
    def from_exponents(cls, variables: Sequence[str],
                       entries: Iterable[tuple[Mapping[str, int], Fraction]]) -> "SparsePoly":
        variables = tuple(variables)
        idx = _index_map(variables)
        terms: dict[int, Fraction] = {}
        for exps, coeff in entries:
            key = 0
            for name, e in exps.items():
                if name not in idx:
                    raise VariableMismatchError(f"unknown variable {name!r}")
                if not 0 <= e < _MAX_EXP:
                    raise ValueError(f"exponent {e} out of range")
                key += e << (_WIDTH * idx[name])
            c = terms.get(key, Fraction(0)) + Fraction(coeff)
            if c:
                terms[key] = c
            else:
                terms.pop(key, None)
        return cls(variables, terms)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max monomial degree; the zero polynomial reports -1."""
        if self._deg is None:
            d = max((_key_degree(k) for k in self.terms), default=-1)
            object.__setattr__(self, "_deg", d)
        return self._deg

    def exponent_of(self, key: int, name: str) -> int:
        idx = _index_map(self.variables)[name]
        return (key >> (_WIDTH * idx)) & _MASK

    def decode(self, key: int) -> tuple[int, ...]:
        return tuple((key >> (_WIDTH * i)) & _MASK for i in range(len(self.variables)))

    def monomials(self) -> list[tuple[dict[str, int], Fraction]]:
        """Terms as ({variable: exponent}, coefficient) pairs."""
        out = []
        for key, coeff in self.terms.items():
            exps = {}
            k = key
            i = 0
            while k:
                e = k & _MASK
                if e:
                    exps[self.variables[i]] = e
                k >>= _WIDTH
                i += 1
            out.append((exps, coeff))
        return out

    def constant_term(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def factored_terms(self) -> list[tuple[tuple[tuple[int, int], ...], Fraction]]:
        """Terms with decoded (variable index, exponent) factors; cached."""
        if self._factors is None:
            out = []
            for key, coeff in self.terms.items():
                factors = []
                kk = key
                i = 0
                while kk:
                    e = kk & _MASK
                    if e:
                        factors.append((i, e))
                    kk >>= _WIDTH
                    i += 1
                out.append((tuple(factors), coeff))
            object.__setattr__(self, "_factors", out)
        return self._factors

    def max_exponent(self, name: str) -> int:
        idx = _index_map(self.variables)[name]
        shift = _WIDTH * idx
        return max(((k >> shift) & _MASK for k in self.terms), default=0)

    # -- arithmetic -------------------------------------------------------

    def _check_same_vars(self, other: "SparsePoly") -> None:
        if self.variables != other.variables:
            raise VariableMismatchError("operands have different variable sets")

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparsePoly) and self.variables == other.variables
                and self.terms == other.terms)

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_same_vars(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k)
            if s is None:
                terms[k] = c
            else:
                s = s + c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
        return SparsePoly(self.variables, terms)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.variables, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def scalar_mul(self, value) -> "SparsePoly":
        c = Fraction(value)
        if not c:
            return SparsePoly(self.variables)
        return SparsePoly(self.variables, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scalar_mul(other)
        self._check_same_vars(other)
        if not self.terms or not other.terms:
            return SparsePoly(self.variables)
        if self.total_degree() + other.total_degree() >= _MAX_EXP:
            raise ValueError("product degree exceeds packed-exponent capacity")
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        terms: dict[int, Fraction] = {}
        get = terms.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                c = ca * cb
                s = get(k)
                if s is None:
                    terms[k] = c
                else:
                    s = s + c
                    if s:
                        terms[k] = s
                    else:
                        del terms[k]
        return SparsePoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative power")
        result = SparsePoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and structure -------------------------------------------

    def partial_derivative(self, name: str) -> "SparsePoly":
        idx = _index_map(self.variables).get(name)
        if idx is None:
            raise VariableMismatchError(f"unknown variable {name!r}")
        shift = _WIDTH * idx
        terms: dict[int, Fraction] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                terms[k - (1 << shift)] = c * e
        return SparsePoly(self.variables, terms)

    def homogeneous_component(self, degree: int) -> "SparsePoly":
        return SparsePoly(
            self.variables,
            {k: c for k, c in self.terms.items() if _key_degree(k) == degree},
        )

    def lowest_degree_component(self) -> "SparsePoly":
        """Initial term: homogeneous part of minimal degree; 0 stays 0."""
        if not self.terms:
            return self
        d = min(_key_degree(k) for k in self.terms)
        return self.homogeneous_component(d)

    def lowest_degree(self) -> int:
        if not self.terms:
            return -1
        return min(_key_degree(k) for k in self.terms)

    def substitute(self, assignments: Mapping[str, object]) -> "SparsePoly":
        """Substitute rational values for a subset of the variables."""
        idx = _index_map(self.variables)
        subs: dict[int, Fraction] = {}
        for name, value in assignments.items():
            if name not in idx:
                raise VariableMismatchError(f"unknown variable {name!r}")
            subs[idx[name]] = Fraction(value)
        terms: dict[int, Fraction] = {}
        for k, c in self.terms.items():
            key = 0
            coeff = c
            kk = k
            i = 0
            while kk:
                e = kk & _MASK
                if e:
                    if i in subs:
                        v = subs[i]
                        if not v:
                            coeff = Fraction(0)
                            break
                        coeff *= v ** e
                    else:
                        key += e << (_WIDTH * i)
                kk >>= _WIDTH
                i += 1
            if coeff:
                s = terms.get(key, Fraction(0)) + coeff
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return SparsePoly(self.variables, terms)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Evaluate at a full point; missing variables are reported by name."""
        idx = _index_map(self.variables)
        values: dict[int, Fraction] = {}
        for name, value in point.items():
            if name not in idx:
                raise VariableMismatchError(f"unknown variable {name!r}")
            values[idx[name]] = Fraction(value)
        total = Fraction(0)
        for k, c in self.terms.items():
            term = c
            kk = k
            i = 0
            while kk:
                e = kk & _MASK
                if e:
                    if i not in values:
                        raise VariableMismatchError(
                            f"no value assigned to variable {self.variables[i]!r}")
                    term *= values[i] ** e
                kk >>= _WIDTH
                i += 1
            total += term
        return total

    def coefficient_of(self, name: str, power: int) -> "SparsePoly":
        """Coefficient of ``name ** power`` as a polynomial in the rest."""
        idx = _index_map(self.variables)[name]
        shift = _WIDTH * idx
        terms = {}
        for k, c in self.terms.items():
            if (k >> shift) & _MASK == power:
                terms[k - (power << shift)] = c
        return SparsePoly(self.variables, terms)

    # -- canonical rendering ------------------------------------------------

    def _sort_key(self, key: int):
        return (_key_degree(key), self.decode(key))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=self._sort_key, reverse=True):
            coeff = self.terms[key]
            factors = []
            for i, e in enumerate(self.decode(key)):
                if e == 1:
                    factors.append(self.variables[i])
                elif e > 1:
                    factors.append(f"{self.variables[i]}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append(("-" if coeff < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"SparsePoly({self})"
