"""Exact symbolic algebra over the Gaussian rationals.

Three immutable value types:

* ``Polynomial``   -- sparse map ``exponent tuple -> ComplexRational``
* ``DiffOperator`` -- sparse map ``derivative multi-index -> Polynomial``,
  always in normal form (coefficients to the left of derivatives)
* ``ExpFunction``  -- ``Q * exp(S)`` with ``Q``, ``S`` polynomials

All share a *variable universe*: an ordered tuple of variable names. Operations
between objects from different universes raise ``ValueError``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]


class ComplexRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value, 0)
        if isinstance(value, float):
            return cls(Fraction(value), 0)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot convert {type(value).__name__} to ComplexRational")

    def __add__(self, other):
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __mul__(self, other):
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def inverse(self) -> "ComplexRational":
        den = self.re * self.re + self.im * self.im
        if den == 0:
            raise ZeroDivisionError("inverse of zero ComplexRational")
        return ComplexRational(self.re / den, -self.im / den)

    def __truediv__(self, other):
        return self * ComplexRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are exact")
        base = self if n >= 0 else self.inverse()
        out = ComplexRational(1)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        try:
            o = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self):
        return f"ComplexRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i" if self.im != 1 else "i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)


def _check_universe(a, b) -> None:
    if a.variables != b.variables:
        raise ValueError(f"variable universes differ: {a.variables} vs {b.variables}")


def _grlex_key(exp: Exponent):
    return (-sum(exp), tuple(-e for e in exp))


def _monomial_str(variables: Sequence[str], exp: Exponent, power_sym="^") -> str:
    parts = []
    for name, e in zip(variables, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}{power_sym}{e}")
    return "*".join(parts)


class Polynomial:
    """Multivariate polynomial with ComplexRational coefficients.

    Stored canonically: no zero coefficients, so equality is a dict comparison.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exponent, ComplexRational] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} variables")
            c = ComplexRational.coerce(c)
            if c:
                clean[exp] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Exponent, ComplexRational]) -> "Polynomial":
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        exp = [0] * len(variables)
        exp[variables.index(name)] = 1
        return cls._raw(variables, {tuple(exp): ONE})

    @property
    def terms(self) -> Dict[Exponent, ComplexRational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, ComplexRational]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_universe(self, other)
            return other
        return Polynomial.const(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, ZERO) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "Polynomial":
        c = ComplexRational.coerce(value)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        _check_universe(self, other)
        out: Dict[Exponent, ComplexRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Polynomial._raw(self.variables, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = Polynomial.const(self.variables, 1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, index: int, order: int = 1) -> "Polynomial":
        """Partial derivative of the given order in variable ``index``."""
        out = {}
        for exp, c in self._terms.items():
            e = exp[index]
            if e < order:
                continue
            falling = 1
            for k in range(order):
                falling *= e - k
            new = list(exp)
            new[index] = e - order
            out[tuple(new)] = c * falling
        return Polynomial._raw(self.variables, out)

    def diff_multi(self, alpha: Exponent) -> "Polynomial":
        p = self
        for i, k in enumerate(alpha):
            if k:
                p = p.diff(i, k)
        return p

    def conjugate_coefficients(self) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: c.conjugate() for e, c in self._terms.items()})

    def evaluate(self, values) -> complex:
        """Numeric value; ``values`` is a mapping name -> number or a sequence."""
        if isinstance(values, Mapping):
            values = [values[name] for name in self.variables]
        vals = [complex(v) for v in values]
        total = 0j
        for exp, c in self._terms.items():
            term = complex(c)
            for v, e in zip(vals, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self._terms == other._terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def render(self) -> str:
        """Deterministic plain-text rendering (graded-lex, highest degree first)."""
        if not self._terms:
            return "0"
        chunks = []
        for exp in sorted(self._terms, key=_grlex_key):
            c = self._terms[exp]
            mono = _monomial_str(self.variables, exp)
            if not mono:
                chunks.append(str(c))
            elif c == ONE:
                chunks.append(mono)
            elif c == -ONE:
                chunks.append(f"-{mono}")
            else:
                chunks.append(f"{c}*{mono}")
        return " + ".join(chunks).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self.render()})"


def _multi_binomials(alpha: Exponent) -> Iterable[Tuple[Exponent, int]]:
    """All gamma <= alpha with the product of binomials C(alpha_i, gamma_i)."""
    for gamma in product(*(range(a + 1) for a in alpha)):
        coef = 1
        for a, g in zip(alpha, gamma):
            coef *= comb(a, g)
        yield gamma, coef


class DiffOperator:
    """Linear differential operator ``sum_alpha P_alpha(x) d^alpha``."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Polynomial] | None = None):
        self.variables = tuple(variables)
        clean: Dict[Exponent, Polynomial] = {}
        for alpha, p in (terms or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != len(self.variables):
                raise ValueError(f"multi-index {alpha} does not match variables")
            if not isinstance(p, Polynomial):
                p = Polynomial.const(self.variables, p)
            _check_universe(self, p)
            if alpha in clean:
                p = clean[alpha] + p
            if p.is_zero():
                clean.pop(alpha, None)
            else:
                clean[alpha] = p
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms):
        op = cls.__new__(cls)
        op.variables = variables
        op._terms = terms
        op._hash = None
        return op

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "DiffOperator":
        return cls._raw(tuple(variables), {})

    @classmethod
    def identity(cls, variables: Sequence[str]) -> "DiffOperator":
        return cls.multiply(Polynomial.const(variables, 1))

    @classmethod
    def multiply(cls, poly: Polynomial) -> "DiffOperator":
        zero = (0,) * len(poly.variables)
        return cls._raw(poly.variables, {} if poly.is_zero() else {zero: poly})

    @classmethod
    def partial(cls, variables: Sequence[str], name: str, order: int = 1) -> "DiffOperator":
        variables = tuple(variables)
        alpha = [0] * len(variables)
        alpha[variables.index(name)] = order
        return cls._raw(variables, {tuple(alpha): Polynomial.const(variables, 1)})

    @property
    def terms(self) -> Dict[Exponent, Polynomial]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def order(self) -> int:
        return max((sum(a) for a in self._terms), default=-1)

    def _coerce(self, other) -> "DiffOperator":
        if isinstance(other, DiffOperator):
            _check_universe(self, other)
            return other
        if isinstance(other, Polynomial):
            _check_universe(self, other)
            return DiffOperator.multiply(other)
        return DiffOperator.multiply(Polynomial.const(self.variables, other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for alpha, p in other._terms.items():
            s = out[alpha] + p if alpha in out else p
            if s.is_zero():
                out.pop(alpha, None)
            else:
                out[alpha] = s
        return DiffOperator._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator._raw(self.variables, {a: -p for a, p in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "DiffOperator":
        c = ComplexRational.coerce(value)
        if not c:
            return DiffOperator.zero(self.variables)
        return DiffOperator._raw(self.variables, {a: p.scale(c) for a, p in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (DiffOperator, Polynomial)):
            return compose(self, self._coerce(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Polynomial):
            return compose(self._coerce(other), self)
        return self.scale(other)

    __matmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def max_abs_coefficient(self) -> float:
        return max((p.max_abs_coefficient() for p in self._terms.values()), default=0.0)

    def render(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for alpha in sorted(self._terms, key=_grlex_key):
            p = self._terms[alpha]
            d = _monomial_str(["d" + v for v in self.variables], alpha)
            coeff = p.render()
            if not d:
                chunks.append(f"({coeff})" if len(p) > 1 else coeff)
            elif p == Polynomial.const(self.variables, 1):
                chunks.append(d)
            else:
                chunks.append(f"({coeff})*{d}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"DiffOperator({self.render()})"


def poly_arith(p: Polynomial, q, op: str) -> Polynomial:
    """``op`` in {add, mul, scale}; for ``scale`` ``q`` is a number."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown polynomial operation {op!r}")


def compose(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """Normal form of ``a o b`` by the generalized Leibniz rule."""
    _check_universe(a, b)
    out: Dict[Exponent, Polynomial] = {}
    for alpha, P in a._terms.items():
        splits = list(_multi_binomials(alpha))
        for beta, Q in b._terms.items():
            for gamma, coef in splits:
                dQ = Q.diff_multi(gamma)
                if dQ.is_zero():
                    continue
                key = tuple(a_ - g + b_ for a_, g, b_ in zip(alpha, gamma, beta))
                term = (P * dQ).scale(coef)
                out[key] = out[key] + term if key in out else term
    return DiffOperator._raw(a.variables, {k: v for k, v in out.items() if not v.is_zero()})


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return compose(a, b) - compose(b, a)


class ExpFunction:
    """The function ``prefactor * exp(exponent)``."""

    __slots__ = ("prefactor", "exponent")

    def __init__(self, prefactor: Polynomial, exponent: Polynomial):
        _check_universe(prefactor, exponent)
        self.prefactor = prefactor
        self.exponent = exponent

    @property
    def variables(self):
        return self.prefactor.variables

    def is_zero(self) -> bool:
        return self.prefactor.is_zero()

    def __add__(self, other: "ExpFunction") -> "ExpFunction":
        if other.exponent != self.exponent:
            raise ValueError("can only add ExpFunctions sharing an exponent")
        return ExpFunction(self.prefactor + other.prefactor, self.exponent)

    def __sub__(self, other: "ExpFunction") -> "ExpFunction":
        return self + other.scale(-1)

    def scale(self, value) -> "ExpFunction":
        return ExpFunction(self.prefactor.scale(value), self.exponent)

    def __eq__(self, other):
        if not isinstance(other, ExpFunction):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.variables == other.variables
        return self.prefactor == other.prefactor and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.prefactor, self.exponent))

    def evaluate(self, values) -> complex:
        import cmath

        return self.prefactor.evaluate(values) * cmath.exp(self.exponent.evaluate(values))

    def __repr__(self):
        return f"ExpFunction(({self.prefactor.render()}) * exp({self.exponent.render()}))"


def apply(a: DiffOperator, f: ExpFunction) -> ExpFunction:
    """Apply ``a`` to ``f``; the result keeps ``f``'s exponent.

    d_i (Q e^S) = (d_i Q + Q d_i S) e^S, so each derivative acts on the
    prefactor through D_i = d_i + (d_i S).
    """
    _check_universe(a, f.prefactor)
    S = f.exponent
    grads = [S.diff(i) for i in range(len(S.variables))]
    cache: Dict[Exponent, Polynomial] = {(0,) * len(S.variables): f.prefactor}

    def covariant(alpha: Exponent) -> Polynomial:
        if alpha in cache:
            return cache[alpha]
        i = next(k for k, e in enumerate(alpha) if e)
        lower = list(alpha)
        lower[i] -= 1
        prev = covariant(tuple(lower))
        res = prev.diff(i) + prev * grads[i]
        cache[alpha] = res
        return res

    total = Polynomial.zero(S.variables)
    for alpha, P in a._terms.items():
        total = total + P * covariant(alpha)
    return ExpFunction(total, S)
