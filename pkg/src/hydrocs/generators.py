"""Generator realizations of so(4,2) and the exact algebraic checks built on them.

Exact realizations (polynomial coefficients, checked with zero tolerance):

* ``osc8``        oscillator form in (z1, z2, zb1, zb2)
* ``param13``     so(3,2) acting on the complex 3-vector u
* ``param-cont2`` so(4,1) acting on the real 3-vector v
* ``twistor3``    conformal generators on the tube domain in C^4

``config11`` (configuration space, coefficients contain r = |x|) is numeric
only; its operators act on callables through finite differences.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import TOL
from .exactalg import (
    ONE,
    ZERO,
    ComplexRational,
    DiffOperator,
    ExpFunction,
    Polynomial,
    apply,
    commutator,
    compose,
)
from .numerics import FDStencil

INDICES = (0, 1, 2, 3, 5, 6)
ETA = {0: 1, 1: -1, 2: -1, 3: -1, 5: 1, 6: -1}
ETA_SWAPPED_56 = {0: 1, 1: -1, 2: -1, 3: -1, 5: -1, 6: 1}

TAGS = ("osc8", "param13", "param-cont2", "twistor3", "config11")
OSC_VARS = ("z1", "z2", "zb1", "zb2")

HALF = ComplexRational(Fraction(1, 2))
I = ComplexRational(0, 1)
MINUS_I = ComplexRational(0, -1)

Pair = Tuple[int, int]


def canonical_pair(A: int, B: int) -> Tuple[Pair, int]:
    """Sorted pair and the sign relating L_AB to L_sorted."""
    if A == B:
        raise ValueError("L_AA is not a generator")
    return ((A, B), 1) if INDICES.index(A) < INDICES.index(B) else ((B, A), -1)


@dataclass
class GeneratorFamily:
    tag: str
    variables: Tuple[str, ...]
    ops: Dict[Pair, object]  # keys are canonical pairs
    metric: Dict[int, int] = field(default_factory=lambda: dict(ETA))
    numeric_only: bool = False

    def get(self, A: int, B: int):
        """L_AB with antisymmetry; None if the realization does not define it."""
        if A == B:
            return None
        key, sign = canonical_pair(A, B)
        op = self.ops.get(key)
        if op is None:
            return None
        return op if sign == 1 else -op

    def pairs(self) -> List[Pair]:
        return sorted(self.ops, key=lambda p: (INDICES.index(p[0]), INDICES.index(p[1])))

    def with_signs(self, signs: Dict[Pair, int]) -> "GeneratorFamily":
        ops = {p: (op if signs.get(p, 1) == 1 else -op) for p, op in self.ops.items()}
        return GeneratorFamily(self.tag, self.variables, ops, dict(self.metric), self.numeric_only)


def _store(ops: Dict[Pair, object], A: int, B: int, op) -> None:
    key, sign = canonical_pair(A, B)
    ops[key] = op if sign == 1 else -op


# ---------------------------------------------------------------- osc8

PAULI = (
    ((0, 1), (1, 0)),
    ((0, MINUS_I), (I, 0)),
    ((1, 0), (0, -1)),
)


def _mat(m) -> List[List[ComplexRational]]:
    return [[ComplexRational.coerce(x) for x in row] for row in m]


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(2)), ZERO) for j in range(2)] for i in range(2)]


SIGMA = [_mat(s) for s in PAULI]
C_MAT = _mat(((0, 1), (-1, 0)))  # i*sigma_2


def ladder_operators(variables: Sequence[str] = OSC_VARS) -> Dict[str, List[DiffOperator]]:
    """sqrt(2) times a, a^dagger, b, b^dagger as DiffOperators.

    Dropping the common 1/sqrt(2) keeps every coefficient rational; quadratic
    forms pick up an exact factor 1/2.
    """
    z = [DiffOperator.multiply(Polynomial.var(variables, v)) for v in variables[:2]]
    zb = [DiffOperator.multiply(Polynomial.var(variables, v)) for v in variables[2:]]
    dz = [DiffOperator.partial(variables, v) for v in variables[:2]]
    dzb = [DiffOperator.partial(variables, v) for v in variables[2:]]
    eps = ((0, 1), (-1, 0))
    a = [zb[al] + dz[al] for al in range(2)]
    ad = [z[al] - dzb[al] for al in range(2)]
    b = [sum((z[be] + dzb[be]).scale(eps[al][be]) for be in range(2) if eps[al][be]) for al in range(2)]
    bd = [sum((zb[be] - dz[be]).scale(eps[al][be]) for be in range(2) if eps[al][be]) for al in range(2)]
    return {"a": a, "ad": ad, "b": b, "bd": bd}


def _bilinear(left: List[DiffOperator], M, right: List[DiffOperator]) -> DiffOperator:
    out = DiffOperator.zero(left[0].variables)
    for p in range(2):
        for q in range(2):
            if M[p][q]:
                out = out + compose(left[p], right[q]).scale(M[p][q])
    return out


def _osc8() -> GeneratorFamily:
    ld = ladder_operators()
    a, ad, b, bd = ld["a"], ld["ad"], ld["b"], ld["bd"]
    quarter = ComplexRational(Fraction(1, 4))
    ops: Dict[Pair, DiffOperator] = {}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        s_i, s_k = SIGMA[i], SIGMA[k]
        s_iC = _matmul(s_i, C_MAT)
        C_si = _matmul(C_MAT, s_i)
        # each bilinear carries 1/2 from the ladder scaling
        _store(ops, i + 1, j + 1, (_bilinear(ad, s_k, a) + _bilinear(bd, s_k, b)).scale(quarter))
        _store(ops, i + 1, 5, (_bilinear(ad, s_iC, bd) - _bilinear(a, C_si, b)).scale(-quarter))
        _store(ops, i + 1, 0, (_bilinear(ad, s_iC, bd) + _bilinear(a, C_si, b)).scale(quarter * MINUS_I))
        _store(ops, i + 1, 6, (_bilinear(ad, s_i, a) - _bilinear(bd, s_i, b)).scale(-quarter))
    number = sum((compose(ad[p], a[p]) + compose(bd[p], b[p]) for p in range(2)), DiffOperator.zero(OSC_VARS))
    _store(ops, 5, 0, number.scale(quarter) + DiffOperator.identity(OSC_VARS))
    _store(ops, 5, 6, (_bilinear(ad, C_MAT, bd) - _bilinear(a, C_MAT, b)).scale(quarter * I))
    _store(ops, 6, 0, (_bilinear(ad, C_MAT, bd) + _bilinear(a, C_MAT, b)).scale(quarter))
    return GeneratorFamily("osc8", OSC_VARS, ops)


# ---------------------------------------------------------------- param13, cont2, twistor3


def _vec_ops(variables):
    x = [Polynomial.var(variables, v) for v in variables]
    d = [DiffOperator.partial(variables, v) for v in variables]
    euler = sum((DiffOperator.multiply(x[i]) * d[i] for i in range(len(variables))), DiffOperator.zero(variables))
    return x, d, euler


def _param13() -> GeneratorFamily:
    V = ("u1", "u2", "u3")
    u, d, udu = _vec_ops(V)
    u2 = sum((ui * ui for ui in u), Polynomial.zero(V))
    one = Polynomial.const(V, 1)
    ops: Dict[Pair, DiffOperator] = {}
    for i in range(3):
        for j in range(i + 1, 3):
            op = DiffOperator.multiply(u[i]) * d[j] - DiffOperator.multiply(u[j]) * d[i]
            _store(ops, i + 1, j + 1, op.scale(I))
        l5i = DiffOperator.multiply((one + u2).scale(HALF)) * d[i] - DiffOperator.multiply(u[i]) * udu
        _store(ops, 5, i + 1, l5i.scale(I))
        l0i = DiffOperator.multiply((one - u2).scale(HALF)) * d[i] + DiffOperator.multiply(u[i]) * udu
        _store(ops, 0, i + 1, -l0i)
    _store(ops, 5, 0, udu)
    return GeneratorFamily("param13", V, ops)


def _cont2() -> GeneratorFamily:
    V = ("v1", "v2", "v3")
    v, d, vdv = _vec_ops(V)
    v2 = sum((vi * vi for vi in v), Polynomial.zero(V))
    ops: Dict[Pair, DiffOperator] = {}
    for i in range(3):
        i_pi_minus = -d[i]
        i_pi_plus = DiffOperator.multiply(v2) * d[i] - DiffOperator.multiply(v[i].scale(2)) * vdv
        pi_minus = i_pi_minus.scale(MINUS_I)
        pi_plus = i_pi_plus.scale(MINUS_I)
        # Pi^+- = L_6i +- L_0i
        _store(ops, 6, i + 1, (pi_plus + pi_minus).scale(HALF))
        _store(ops, 0, i + 1, (pi_plus - pi_minus).scale(HALF))
        for k in range(i + 1, 3):
            op = DiffOperator.multiply(v[k]) * d[i] - DiffOperator.multiply(v[i]) * d[k]
            _store(ops, i + 1, k + 1, op.scale(MINUS_I))
    _store(ops, 0, 6, vdv.scale(MINUS_I))
    return GeneratorFamily("param-cont2", V, ops)


MINKOWSKI = (1, -1, -1, -1)


def _twistor3() -> GeneratorFamily:
    V = ("z0", "z1", "z2", "z3")
    z, d, zdz = _vec_ops(V)
    z_low = [z[m].scale(MINKOWSKI[m]) for m in range(4)]
    zz = sum((z[m] * z_low[m] for m in range(4)), Polynomial.zero(V))
    ops: Dict[Pair, DiffOperator] = {}
    for m in range(4):
        plus = (
            DiffOperator.multiply(zz) * d[m]
            - DiffOperator.multiply(z_low[m].scale(2)) * zdz
            - DiffOperator.multiply(z_low[m].scale(2))
        )
        minus = d[m]
        # i(L5+L6) = plus, i(L5-L6) = minus
        _store(ops, 5, m, (plus + minus).scale(HALF * MINUS_I))
        _store(ops, 6, m, (plus - minus).scale(HALF * MINUS_I))
        for n in range(m + 1, 4):
            op = DiffOperator.multiply(z_low[m]) * d[n] - DiffOperator.multiply(z_low[n]) * d[m]
            _store(ops, m, n, op.scale(MINUS_I))
    _store(ops, 6, 5, (zdz + DiffOperator.identity(V)).scale(MINUS_I))
    return GeneratorFamily("twistor3", V, ops)


# ---------------------------------------------------------------- config11 (numeric)


@dataclass(frozen=True)
class ConfigOperator:
    """Second-order operator c0 f + c_i d_i f + c_ij d_i d_j f on R^3.

    Coefficients are vectorized callables of an (N, 3) point array; a missing
    entry means zero. Negation and scaling act on a global factor.
    """

    c0: Optional[Callable] = None
    c1: Tuple[Optional[Callable], ...] = (None, None, None)
    c2: Tuple[Tuple[Optional[Callable], ...], ...] = ((None,) * 3,) * 3
    factor: complex = 1.0

    def __neg__(self):
        return ConfigOperator(self.c0, self.c1, self.c2, -self.factor)

    def scale(self, s):
        return ConfigOperator(self.c0, self.c1, self.c2, self.factor * s)

    def __call__(self, f: Callable, stencil: Optional[FDStencil] = None) -> Callable:
        """The function L f, itself a vectorized callable."""
        st = stencil or FDStencil(order=1, accuracy=4, h=TOL.fd_step_commutator)

        def Lf(X):
            X = np.atleast_2d(np.asarray(X, dtype=float))
            out = np.zeros(len(X), dtype=complex)
            if self.c0 is not None:
                out += self.c0(X) * f(X)
            for i in range(3):
                if self.c1[i] is not None:
                    out += self.c1[i](X) * st.partial(f, X, i)
            for i in range(3):
                for j in range(i, 3):
                    cij = self.c2[i][j]
                    if cij is not None:
                        out += cij(X) * st.second(f, X, i, j)
            return self.factor * out

        return Lf


def _radius(X):
    return np.sqrt(np.sum(X * X, axis=1))


def _config11() -> GeneratorFamily:
    LEVI = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    const = lambda c: (lambda X: np.full(len(X), c, dtype=complex))  # noqa: E731
    coord = lambda i, s=1.0: (lambda X: s * X[:, i])  # noqa: E731
    ops: Dict[Pair, ConfigOperator] = {}

    # Laplacian and x_j d_i d_j as upper-triangular coefficient tables
    def lap_table(coef):
        t = [[None] * 3 for _ in range(3)]
        for i in range(3):
            t[i][i] = coef
        return t

    for i in range(3):
        for j in range(i + 1, 3):
            k = 3 - i - j
            # eps_ijk (x cross p)_k, (x cross p)_k = -i eps_kab x_a d_b
            s = LEVI[(i, j, k)]
            c1 = [None, None, None]
            for (a, b, c), e in LEVI.items():
                if a == k:
                    c1[c] = coord(b, -1j * s * e)
            ops[(i + 1, j + 1)] = ConfigOperator(c1=tuple(c1))

    for i in range(3):
        for sign, B in ((1.0, 6), (-1.0, 5)):
            # 1/2 x_i lap - d_i - x_j d_i d_j +- 1/2 x_i
            t = [[None] * 3 for _ in range(3)]
            for j in range(3):
                lo, hi = min(i, j), max(i, j)
                if j == i:
                    t[i][i] = (lambda X, i=i: 0.5 * X[:, i] - X[:, i])
                else:
                    t[lo][hi] = coord(j, -1.0)
            for j in range(3):
                if j != i:
                    t[j][j] = coord(i, 0.5)
            c1 = [None, None, None]
            c1[i] = const(-1.0)
            op = ConfigOperator(c0=coord(i, 0.5 * sign), c1=tuple(c1), c2=tuple(tuple(r) for r in t))
            _store(ops, i + 1, B, op)
        c1 = [None, None, None]
        c1[i] = lambda X: 1j * _radius(X)
        _store(ops, i + 1, 0, ConfigOperator(c1=tuple(c1)))

    _store(ops, 6, 5, ConfigOperator(c0=const(-1j), c1=tuple(coord(j, -1j) for j in range(3))))
    half_r = lambda s: (lambda X: s * 0.5 * _radius(X))  # noqa: E731
    lap_minus_half_r = tuple(tuple(r) for r in lap_table(half_r(-1.0)))
    _store(ops, 6, 0, ConfigOperator(c0=half_r(-1.0), c2=lap_minus_half_r))
    _store(ops, 5, 0, ConfigOperator(c0=half_r(1.0), c2=lap_minus_half_r))
    return GeneratorFamily("config11", ("x1", "x2", "x3"), ops, numeric_only=True)


_BUILDERS = {
    "osc8": _osc8,
    "param13": _param13,
    "param-cont2": _cont2,
    "twistor3": _twistor3,
    "config11": _config11,
}
_CACHE: Dict[str, GeneratorFamily] = {}


def build_family(tag: str) -> GeneratorFamily:
    if tag not in _BUILDERS:
        raise ValueError(f"unknown realization {tag!r}; expected one of {TAGS}")
    if tag not in _CACHE:
        _CACHE[tag] = _BUILDERS[tag]()
    return _CACHE[tag]


# ---------------------------------------------------------------- commutation relation checks


def structure_rhs(fam: GeneratorFamily, A, B, C, D, metric=None):
    """i(eta_AD L_BC + eta_BC L_AD - eta_AC L_BD - eta_BD L_AC); None if a term is undefined."""
    eta = metric or fam.metric
    total = None
    for coef, (P, Q) in (
        (eta[A] if A == D else 0, (B, C)),
        (eta[B] if B == C else 0, (A, D)),
        (-(eta[A] if A == C else 0), (B, D)),
        (-(eta[B] if B == D else 0), (A, C)),
    ):
        if coef == 0 or P == Q:
            continue
        op = fam.get(P, Q)
        if op is None:
            return None
        term = op.scale(I * coef)
        total = term if total is None else total + term
    if total is None:
        return DiffOperator.zero(fam.variables)
    return total


@dataclass
class CommutatorFinding:
    left: Pair
    right: Pair
    residual: Optional[DiffOperator]  # None: structure constant needs an undefined generator

    def to_dict(self):
        return {
            "pair": [list(self.left), list(self.right)],
            "residual_terms": "undefined generator" if self.residual is None else self.residual.render(),
        }


def check_commutators(fam: GeneratorFamily, metric=None) -> List[CommutatorFinding]:
    if fam.numeric_only:
        raise ValueError("config11 is numeric-only; use check_config11_commutators")
    report = []
    for p, q in itertools.combinations(fam.pairs(), 2):
        lhs = commutator(fam.ops[p], fam.ops[q])
        rhs = structure_rhs(fam, p[0], p[1], q[0], q[1], metric)
        if rhs is None:
            report.append(CommutatorFinding(p, q, None))
            continue
        res = lhs - rhs
        if not res.is_zero():
            report.append(CommutatorFinding(p, q, res))
    return report


def n_checked_pairs(fam: GeneratorFamily) -> int:
    n = len(fam.ops)
    return n * (n - 1) // 2


GENERATOR_CLASSES = ("ij", "0i", "5i", "6i", "05", "06", "56")


def generator_class(p: Pair) -> str:
    spatial = [x for x in p if x in (1, 2, 3)]
    if len(spatial) == 2:
        return "ij"
    if len(spatial) == 1:
        other = p[0] if p[1] == spatial[0] else p[1]
        return f"{other}i"
    return "".join(str(x) for x in sorted(p))


def convention_search(fam: GeneratorFamily, max_flips: int = 3):
    """Smallest sets of generator-class sign flips (and metric variant) that close the so(4,2) relations.

    Diagnostic only. Commutators are computed once; a sign pattern rescales
    them. Returns a list of dicts {metric, flipped, bad} sorted by size.
    """
    pairs = fam.pairs()
    classes = sorted({generator_class(p) for p in pairs}, key=GENERATOR_CLASSES.index)
    comms = {(p, q): commutator(fam.ops[p], fam.ops[q]) for p, q in itertools.combinations(pairs, 2)}
    results = []
    for metric_name, metric in (("standard", ETA), ("swap56", ETA_SWAPPED_56)):
        for size in range(0, max_flips + 1):
            found = []
            for flipped in itertools.combinations(classes, size):
                signs = {p: (-1 if generator_class(p) in flipped else 1) for p in pairs}
                trial = fam.with_signs(signs)
                bad = 0
                for (p, q), c in comms.items():
                    rhs = structure_rhs(trial, p[0], p[1], q[0], q[1], metric)
                    if rhs is None or not (c.scale(signs[p] * signs[q]) - rhs).is_zero():
                        bad += 1
                if bad == 0:
                    found.append(flipped)
                if size == 0:
                    baseline = bad
            if found:
                results.extend({"metric": metric_name, "flipped": list(f), "bad": 0} for f in found)
                break
        else:
            results.append({"metric": metric_name, "flipped": None, "bad": baseline})
    return results


# ---------------------------------------------------------------- Fock states


@dataclass(frozen=True)
class FockState:
    """``sqrt(norm_sq) * value`` is the normalized state of the creation word."""

    label: Tuple[int, int, int]
    value: ExpFunction
    norm_sq: Fraction

    def evaluate(self, z1: complex, z2: complex) -> complex:
        pt = (z1, z2, z1.conjugate(), z2.conjugate())
        return math.sqrt(self.norm_sq) * self.value.evaluate(pt)

    def at_point(self, x) -> complex:
        """Value at a configuration point through parabolic coordinates."""
        xi, eta, phi = to_parabolic_complex(x)
        return self.evaluate(xi * cmath.exp(0.5j * phi) / math.sqrt(2), eta * cmath.exp(-0.5j * phi) / math.sqrt(2))


def to_parabolic_complex(x):
    x1, x2, x3 = (float(c) for c in x)
    r = math.sqrt(x1 * x1 + x2 * x2 + x3 * x3)
    return math.sqrt(max(r + x3, 0.0)), math.sqrt(max(r - x3, 0.0)), math.atan2(x2, x1)


def vacuum(variables=OSC_VARS) -> ExpFunction:
    z1, z2, zb1, zb2 = (Polynomial.var(variables, v) for v in variables)
    return ExpFunction(Polynomial.const(variables, 1), -(z1 * zb1 + z2 * zb2))


def creation_word(label) -> List[Tuple[str, int, int]]:
    n1, n2, m = label
    M = abs(m)
    if m >= 0:
        return [("ad", 0, n2 + M), ("ad", 1, n1), ("bd", 0, n1 + M), ("bd", 1, n2)]
    return [("ad", 0, n2), ("ad", 1, n1 + M), ("bd", 0, n1), ("bd", 1, n2 + M)]


def fock_state(label) -> FockState:
    n1, n2, m = label
    if n1 < 0 or n2 < 0:
        raise ValueError("n1, n2 must be non-negative")
    M = abs(m)
    ld = ladder_operators()
    f = vacuum()
    count = 0
    for kind, al, power in reversed(creation_word(label)):
        for _ in range(power):
            f = apply(ld[kind][al], f)
            count += 1
    # count = 2(n1+n2+|m|); (1/sqrt2)^count is rational
    sign = -1 if (n1 + (m - M) // 2) % 2 else 1
    f = f.scale(ComplexRational(Fraction(sign, 2 ** (count // 2))))
    norm_sq = Fraction(1, math.factorial(n1) * math.factorial(n1 + M) * math.factorial(n2) * math.factorial(n2 + M))
    return FockState((n1, n2, m), f, norm_sq)


def labels_up_to(n_max: int):
    """All discrete labels with principal number n <= n_max."""
    out = []
    for n in range(1, n_max + 1):
        for M in range(n):
            for n1 in range(n - M):
                n2 = n - 1 - M - n1
                for m in sorted({M, -M}):
                    out.append((n1, n2, m))
    return out


def check_eigen_L50(label) -> ExpFunction:
    st = fock_state(label)
    n = label[0] + label[1] + abs(label[2]) + 1
    L50 = build_family("osc8").get(5, 0)
    return apply(L50, st.value) - st.value.scale(n)


def constraint_operator() -> DiffOperator:
    ld = ladder_operators()
    op = sum(
        (compose(ld["a"][p], ld["ad"][p]) - compose(ld["b"][p], ld["bd"][p]) for p in range(2)),
        DiffOperator.zero(OSC_VARS),
    )
    return op.scale(HALF)


def check_constraint(f: ExpFunction) -> ExpFunction:
    return apply(constraint_operator(), f)


# ---------------------------------------------------------------- annihilation and sp(2,R)


def _cr(x) -> ComplexRational:
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, complex):
        return ComplexRational(Fraction(x.real), Fraction(x.imag))
    return ComplexRational.coerce(x)


def lambda_matrix(u) -> List[List[ComplexRational]]:
    """Lambda = C sigma.u = [[u1 + i u2, -u3], [-u3, -u1 + i u2]]."""
    u1, u2, u3 = (_cr(c) for c in u)
    return [[u1 + I * u2, -u3], [-u3, -u1 + I * u2]]


def k_of_u_exact(u) -> List[ComplexRational]:
    u1, u2, u3 = (_cr(c) for c in u)
    s = u1 * u1 + u2 * u2 + u3 * u3
    if s == ONE:
        raise ValueError("u.u = 1: k(u) is singular")
    den = (ONE - s).inverse()
    return [(ONE + s) * den, u1 * 2 * den, u2 * 2 * den, u3 * 2 * den]


def ks_bilinears(variables=OSC_VARS) -> List[Polynomial]:
    """n^mu = zb sigma^mu z for mu = 0..3."""
    z1, z2, zb1, zb2 = (Polynomial.var(variables, v) for v in variables)
    return [
        zb1 * z1 + zb2 * z2,
        zb1 * z2 + zb2 * z1,
        (zb1 * z2).scale(MINUS_I) + (zb2 * z1).scale(I),
        zb1 * z1 - zb2 * z2,
    ]


def cs_exponent(k) -> Polynomial:
    """-k.n with Minkowski contraction, as a polynomial in (z, zb)."""
    n = ks_bilinears()
    out = Polynomial.zero(OSC_VARS)
    for mu in range(4):
        out = out + n[mu].scale(_cr(k[mu]) * (-MINKOWSKI[mu]))
    return out


def AB_operators() -> Dict[str, List[DiffOperator]]:
    """2*sqrt(2) times A, A^dagger, B, B^dagger (a = A + iB, b = A - iB)."""
    ld = ladder_operators()
    a, ad, b, bd = ld["a"], ld["ad"], ld["b"], ld["bd"]
    A = [a[p] + b[p] for p in range(2)]
    Ad = [ad[p] + bd[p] for p in range(2)]
    B = [(a[p] - b[p]).scale(MINUS_I) for p in range(2)]
    Bd = [(ad[p] - bd[p]).scale(I) for p in range(2)]
    return {"A": A, "Ad": Ad, "B": B, "Bd": Bd}


def validate_u(u) -> None:
    uc = [complex(c) for c in u]
    s = sum(c * c for c in uc)
    h = sum(abs(c) ** 2 for c in uc)
    if not abs(s) < 1:
        raise ValueError(f"invalid u: |u.u| = {abs(s):.6g} >= 1 (first validity condition)")
    if not 1 - 2 * h + abs(s) ** 2 > 0:
        raise ValueError("invalid u: 1 - 2 u.u* + |u.u|^2 <= 0 (second validity condition)")


def check_annihilation(u, numeric: bool = False) -> List[ExpFunction]:
    """Residuals of (A_a - Lambda_ab A^dag_b) and (B_a - Lambda_ab B^dag_b) on exp(-k(u).n).

    Symbolic mode needs rational (or ComplexRational) components. Numeric mode
    takes floats: Lambda is exact in the binary value of u, while k(u) is
    evaluated in double precision, so residual coefficients measure roundoff.
    """
    validate_u(u)
    if numeric:
        uc = [complex(c) for c in u]
        s = sum(c * c for c in uc)
        kf = [(1 + s) / (1 - s)] + [2 * c / (1 - s) for c in uc]
        k = [_cr(c) for c in kf]
    else:
        k = k_of_u_exact(u)
    f = ExpFunction(Polynomial.const(OSC_VARS, 1), cs_exponent(k))
    Lam = lambda_matrix(u)
    ops = AB_operators()
    out = []
    for low, up in (("A", "Ad"), ("B", "Bd")):
        for al in range(2):
            op = ops[low][al]
            for be in range(2):
                if Lam[al][be]:
                    op = op - ops[up][be].scale(Lam[al][be])
            out.append(apply(op, f))
    return out


def annihilation_residual(u, numeric: bool = False) -> float:
    return max(r.prefactor.max_abs_coefficient() for r in check_annihilation(u, numeric))


def sp2r_generators() -> Dict[str, DiffOperator]:
    """X_ab, X^dag_ab (a <= b) and Y_ab from the A, B operators."""
    ops = AB_operators()
    A, Ad, B, Bd = ops["A"], ops["Ad"], ops["B"], ops["Bd"]
    eighth = ComplexRational(Fraction(1, 8))
    out = {}
    for al, be in ((0, 0), (0, 1), (1, 1)):
        out[f"X{al+1}{be+1}"] = (compose(A[al], A[be]) + compose(B[al], B[be])).scale(eighth)
        out[f"Xd{al+1}{be+1}"] = (compose(Ad[al], Ad[be]) + compose(Bd[al], Bd[be])).scale(eighth)
    for al in range(2):
        for be in range(2):
            y = compose(A[al], Ad[be]) + compose(Ad[be], A[al]) + compose(B[al], Bd[be]) + compose(Bd[be], B[al])
            out[f"Y{al+1}{be+1}"] = y.scale(eighth * HALF)
    return out


SO32_PAIRS = ((1, 2), (1, 3), (2, 3), (1, 5), (2, 5), (3, 5), (0, 1), (0, 2), (0, 3), (5, 0))


def _flatten(op: DiffOperator) -> Dict[Tuple, ComplexRational]:
    out = {}
    for alpha, p in op.items():
        for exp, c in p.items():
            out[(alpha, exp)] = c
    return out


def exact_solve(columns: List[Dict], target: Dict):
    """Solve sum_k c_k columns[k] = target exactly; returns (coefficients, consistent)."""
    keys = sorted(set().union(target, *columns))
    rows = [[col.get(key, ZERO) for col in columns] + [target.get(key, ZERO)] for key in keys]
    n = len(columns)
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    consistent = all(not row[n] for row in rows[r:])
    coef = [ZERO] * n
    for i, c in enumerate(pivots):
        coef[c] = rows[i][n]
    return coef, consistent


def exact_rank(matrix: List[List[ComplexRational]]) -> int:
    rows = [list(r) for r in matrix]
    rank = 0
    ncol = len(rows[0]) if rows else 0
    for c in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass
class SpanReport:
    names: List[str]
    basis: List[Pair]
    matrix: List[List[ComplexRational]]  # rows: sp(2,R) generators, columns: L basis
    consistent: Dict[str, bool]
    rank: int

    @property
    def ok(self) -> bool:
        return self.rank == len(self.basis) and all(self.consistent.values())


def check_sp2r_span() -> SpanReport:
    fam = build_family("osc8")
    basis = [p for p in SO32_PAIRS]
    cols = [_flatten(fam.get(*p)) for p in basis]
    gens = sp2r_generators()
    names = sorted(gens, key=lambda s: (s[0] != "X" or s[1] == "d", s))
    matrix, consistent = [], {}
    for name in names:
        coef, ok = exact_solve(cols, _flatten(gens[name]))
        matrix.append(coef)
        consistent[name] = ok
    return SpanReport(names, basis, matrix, consistent, exact_rank(matrix))


# ---------------------------------------------------------------- Perelomov ray equality


def perelomov_lambda(case: int, alpha, alpha2=0) -> List[List[complex]]:
    if case == 1:
        return [[0, alpha], [alpha, 0]]
    if case == 2:
        if alpha * alpha2 != 0:
            raise ValueError("case 2 needs alpha1 * alpha2 = 0")
        return [[alpha, 0], [0, alpha2]]
    raise ValueError("case must be 1 or 2")


def u_of_lambda(Lam) -> Tuple[complex, complex, complex]:
    """Invert Lambda = [[u1 + i u2, -u3], [-u3, -u1 + i u2]]."""
    p, q, s = complex(Lam[0][0]), complex(Lam[1][1]), complex(Lam[0][1])
    return ((p - q) / 2, (p + q) / 2j, -s)


def perelomov_ray_check(Lam, n_terms: int, points, weight=1) -> float:
    """Max deviation of f_AxB / f_20 from a constant over ``points``.

    f_AxB = sum_{j<N} (weight * Lambda_ab X^dag_ab)^j / j! |0>, built exactly
    with rational Lambda entries; f_20 = exp(-k(u).n) with u from Lambda.
    Points are (z1, z2) pairs; ratios are normalized by their mean.

    Since [A_a, A^dag_b] = delta_ab / 2 for a = A + iB, b = A - iB, the state
    annihilated by A - Lambda A^dag is the one with weight 1; weight 1/2 is the
    textbook form for canonically normalized modes and is kept as a diagnostic.
    """
    gens = sp2r_generators()
    Lam_c = [[_cr(x) * _cr(weight) * 2 for x in row] for row in Lam]
    gen = DiffOperator.zero(OSC_VARS)
    for al in range(2):
        for be in range(2):
            key = f"Xd{min(al, be)+1}{max(al, be)+1}"
            if Lam_c[al][be]:
                gen = gen + gens[key].scale(Lam_c[al][be] * HALF)
    term = vacuum()
    total = term
    for j in range(1, n_terms):
        term = apply(gen, term).scale(ComplexRational(Fraction(1, j)))
        total = total + term
    u = u_of_lambda([[complex(_cr(x)) for x in row] for row in Lam])
    validate_u(u)
    s = sum(c * c for c in u)
    k = [(1 + s) / (1 - s)] + [2 * c / (1 - s) for c in u]
    ratios = []
    for z1, z2 in points:
        pt = (z1, z2, z1.conjugate(), z2.conjugate())
        n = [pt[2] * pt[0] + pt[3] * pt[1], pt[2] * pt[1] + pt[3] * pt[0],
             -1j * pt[2] * pt[1] + 1j * pt[3] * pt[0], pt[2] * pt[0] - pt[3] * pt[1]]
        kn = k[0] * n[0] - k[1] * n[1] - k[2] * n[2] - k[3] * n[3]
        ratios.append(total.evaluate(pt) / cmath.exp(-kn))
    ratios = np.array(ratios)
    mean = ratios.mean()
    return float(np.max(np.abs(ratios / mean - 1)))


# ---------------------------------------------------------------- plane-wave evaluation and intertwining


def apply_to_plane_wave(op: DiffOperator, grad: Sequence[complex], point: Sequence[complex]) -> complex:
    """(op e^{g.z})(point) / e^{g.point} for a constant gradient g."""
    total = 0j
    for alpha, P in op.items():
        mono = 1 + 0j
        for g, e in zip(grad, alpha):
            if e:
                mono *= g**e
        total += P.evaluate(point) * mono
    return total


def twistor_kernel_value(x, z) -> complex:
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    return cmath.exp(1j * (r * z[0] - x[0] * z[1] - x[1] * z[2] - x[2] * z[3]))


def check_intertwining(samples, pairs=None, h: float = None, detail: bool = False):
    """Max |L11_AB <x|z> - Ltw_AB <x|z>| over samples and generator pairs.

    The config-space side uses finite differences in x; the twistor side is
    exact because d/dz^mu of e^{i n.z} is i n_mu times the kernel.
    """
    tw = build_family("twistor3")
    c11 = build_family("config11")
    h = h or TOL.fd_step_intertwine
    stencil = FDStencil(order=1, accuracy=4, h=h)
    pairs = pairs or c11.pairs()
    worst = 0.0
    per_pair = {}
    for x, z in samples:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0:
            raise ValueError("x = 0: r is singular")
        z = [complex(c) for c in z]
        kern = lambda X, z=z: np.exp(1j * (_radius(X) * z[0] - X[:, 0] * z[1] - X[:, 1] * z[2] - X[:, 2] * z[3]))  # noqa: E731
        K = twistor_kernel_value(x, z)
        grad = [1j * r, -1j * x[0], -1j * x[1], -1j * x[2]]
        for p in pairs:
            lhs = c11.get(*p)(kern, stencil)(x[None, :])[0]
            rhs = apply_to_plane_wave(tw.get(*p), grad, z) * K
            d = abs(lhs - rhs)
            per_pair[p] = max(per_pair.get(p, 0.0), d)
            worst = max(worst, d)
    return (worst, per_pair) if detail else worst


def check_config11_commutators(points, test_function: Callable = None, h: float = None, detail=False):
    """Relative commutation-relation residual for config11 by nested finite differences."""
    fam = build_family("config11")
    stencil = FDStencil(order=1, accuracy=4, h=h or TOL.fd_step_commutator)
    f = test_function or gaussian_test_function()
    X = np.atleast_2d(np.asarray(points, dtype=float))
    applied = {p: fam.ops[p](f, stencil) for p in fam.pairs()}
    values = {p: g(X) for p, g in applied.items()}
    worst = 0.0
    report = {}
    for p, q in itertools.combinations(fam.pairs(), 2):
        pq = fam.ops[p](applied[q], stencil)(X)
        qp = fam.ops[q](applied[p], stencil)(X)
        rhs = np.zeros(len(X), dtype=complex)
        eta = fam.metric
        A, B = p
        C, D = q
        for coef, (P, Q) in (
            (eta[A] if A == D else 0, (B, C)),
            (eta[B] if B == C else 0, (A, D)),
            (-(eta[A] if A == C else 0), (B, D)),
            (-(eta[B] if B == D else 0), (A, C)),
        ):
            if coef == 0 or P == Q:
                continue
            key, sign = canonical_pair(P, Q)
            rhs += 1j * coef * sign * values[key]
        scale = np.maximum(np.maximum(np.abs(pq), np.abs(qp)), 1e-300)
        rel = float(np.max(np.abs(pq - qp - rhs) / scale))
        report[(p, q)] = rel
        worst = max(worst, rel)
    return (worst, report) if detail else worst


def gaussian_test_function(center=(0.2, -0.1, 0.15), width=1.0):
    c = np.asarray(center, dtype=float)

    def f(X):
        X = np.atleast_2d(X)
        d = X - c
        return (1 + 0.3 * X[:, 0] * X[:, 1] + 0.2j * X[:, 2]) * np.exp(-np.sum(d * d, axis=1) / (2 * width**2))

    return f
