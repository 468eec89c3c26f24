"""Numerical invariants of coherent systems of type (n, d, n+1).

All quantities are exact: integers are Python ints, slopes and critical
values are :class:`fractions.Fraction`. Square brackets in the classical
formulas denote the floor and are evaluated with :func:`floor_div`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .exact_arith import DomainError, ceil_div, factorial, floor_div

EMPTY_BY_NEGATIVE_BETA = "β<0: empty by Prop. 6.1"


@dataclass(frozen=True)
class CurveContext:
    """The curve: its genus and whether it is assumed Petri.

    The base field is always taken to be the complex numbers.
    """

    genus: int
    petri: bool = True

    def __post_init__(self):
        if isinstance(self.genus, bool) or not isinstance(self.genus, int):
            raise TypeError(f"genus must be an integer, got {self.genus!r}")
        if self.genus < 0:
            raise DomainError(f"genus must be >= 0, got {self.genus}")

    @property
    def g(self) -> int:
        return self.genus


@dataclass(frozen=True, order=True)
class CSType:
    """Type (rank, degree, number of sections) of a coherent system."""

    n: int
    d: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"rank must be >= 1, got {self.n}")
        if self.k < 0:
            raise DomainError(f"number of sections must be >= 0, got {self.k}")

    def __str__(self) -> str:
        return f"({self.n},{self.d},{self.k})"


@dataclass(frozen=True)
class ExtPairData:
    """Two types plus upper bounds for dim H^0_{12} and dim H^2_{12}."""

    t1: CSType
    t2: CSType
    h0_bound: int = 0
    h2_bound: int = 0

    def __post_init__(self):
        if self.h0_bound < 0 or self.h2_bound < 0:
            raise DomainError("hypercohomology bounds must be nonnegative")


class Witness(NamedTuple):
    n1: int
    d1: int
    k1: int


@dataclass(frozen=True)
class CriticalValueCandidate:
    """A value of alpha where some subtype has the same alpha-slope.

    ``witnesses`` lists every subtype (n1, d1, k1) producing this value; the
    ``witness_*`` fields expose the first of them.
    """

    alpha: Fraction
    witnesses: tuple[Witness, ...]

    @property
    def witness_n1(self) -> int:
        return self.witnesses[0].n1

    @property
    def witness_d1(self) -> int:
        return self.witnesses[0].d1

    @property
    def witness_k1(self) -> int:
        return self.witnesses[0].k1


@dataclass(frozen=True)
class StratumRow:
    t: int
    dim: int
    irreducible: bool
    # set on the last row when beta/(n+1) is an integer: every component of
    # S_{t1} then has the same dimension
    equidimensional: bool = False


@dataclass(frozen=True)
class FlipData:
    type1: CSType
    type2: CSType
    alpha: Fraction
    flip_dim_bound: int
    c12: int
    c21: int


# --- Brill-Noether numbers -------------------------------------------------


def beta(ctx: CurveContext, t: CSType) -> int:
    """n^2(g-1) + 1 - k(k - d + n(g-1))."""
    g = ctx.genus
    return t.n * t.n * (g - 1) + 1 - t.k * (t.k - t.d + t.n * (g - 1))


def beta_np1(ctx: CurveContext, n: int, d: int) -> int:
    """Brill-Noether number of type (n, d, n+1): g - (n+1)(n - d + g)."""
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")
    g = ctx.genus
    return g - (n + 1) * (n - d + g)


def alpha_slope(t: CSType, alpha: Fraction | int) -> Fraction:
    return Fraction(t.d, t.n) + Fraction(alpha) * Fraction(t.k, t.n)


# --- large-alpha threshold and degree bounds -------------------------------


def alpha_l(ctx: CurveContext, n: int, d: int) -> int:
    """Stability threshold d(n-1) - n(n-1+g-[g/n]).

    For alpha above max(0, alpha_l) the moduli space equals G_L; when positive
    it is the top critical value.
    """
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")
    g = ctx.genus
    return d * (n - 1) - n * (n - 1 + g - floor_div(g, n))


def alpha_l_alternatives(ctx: CurveContext, n: int, d: int) -> tuple[int, int]:
    """The two rearranged forms of :func:`alpha_l`, kept for cross-checking."""
    g = ctx.genus
    q = floor_div(g, n)
    return (
        (n - 1) * (d - g - n) - (g - n * q),
        (n - 1) * (d - n) - n * (g - q),
    )


def min_degree_generated(ctx: CurveContext, n: int) -> int:
    """Smallest d with beta(n, d, n+1) >= 0, namely g + n - [g/(n+1)]."""
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")
    g = ctx.genus
    return g + n - floor_div(g, n + 1)


def f_value(ctx: CurveContext, r: int) -> Fraction:
    """(g - [g/(r+1)]) / r, a weakly decreasing function of r >= 1."""
    if r <= 0:
        raise DomainError(f"f is defined for r >= 1, got {r}")
    g = ctx.genus
    return Fraction(g - floor_div(g, r + 1), r)


def us_existence_degree(ctx: CurveContext, n: int) -> int:
    """Degree at which a direct sum of generated pencils gives U^s nonempty.

    n(g+3)/2 for odd g, n(g+2)/2 for even g.
    """
    g = ctx.genus
    if g % 2:
        return n * (g + 3) // 2
    return n * (g + 2) // 2


def pencil_count_even_genus(ctx: CurveContext) -> int:
    """g!/((g/2)!(g/2+1)!): number of degree g/2+1 pencils when g is even."""
    g = ctx.genus
    if g % 2:
        raise DomainError(f"defined for even genus only, got g={g}")
    h = g // 2
    return factorial(g) // (factorial(h) * factorial(h + 1))


def u_existence_threshold(ctx: CurveContext, n: int) -> int:
    """Degree d_1 from which U(n, d, n+1) is nonempty on a Petri curve."""
    g = ctx.genus
    if g % 2:
        return n * (g + 3) // 2 + 1
    if n <= pencil_count_even_genus(ctx):
        return n * (g + 2) // 2 + 1
    return n * (g + 4) // 2 + 1


# --- stratification of G_L -------------------------------------------------


def t_max(ctx: CurveContext, n: int, d: int) -> int:
    """Largest torsion length t1 = d - g - n + [g/(n+1)] on G_L."""
    b = beta_np1(ctx, n, d)
    if b < 0:
        raise DomainError(
            f"stratification undefined for beta={b}", EMPTY_BY_NEGATIVE_BETA
        )
    g = ctx.genus
    return d - g - n + floor_div(g, n + 1)


def stratification(ctx: CurveContext, n: int, d: int) -> list[StratumRow]:
    """Rows (t, dim S_t) for t = 0..t1, with the irreducibility flags."""
    b = beta_np1(ctx, n, d)
    t1 = t_max(ctx, n, d)
    integral = b % (n + 1) == 0
    rows = []
    for t in range(t1 + 1):
        rows.append(
            StratumRow(
                t=t,
                dim=b - t,
                # strict: t < beta/(n+1)
                irreducible=t * (n + 1) < b,
                equidimensional=integral and t == t1,
            )
        )
    return rows


def cardinality_beta_zero(ctx: CurveContext, n: int, d: int) -> int:
    """Number of points of G_L when beta = 0.

    g! * prod_{i=0}^{n} i! / (g - d + n + i)!
    """
    b = beta_np1(ctx, n, d)
    if b != 0:
        raise DomainError(
            f"G_L is finite only when beta = 0, got beta={b}",
            EMPTY_BY_NEGATIVE_BETA if b < 0 else None,
        )
    g = ctx.genus
    num = factorial(g)
    den = 1
    for i in range(n + 1):
        num *= factorial(i)
        den *= factorial(g - d + n + i)
    count, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"non-integral count {num}/{den}")
    return count


# --- extension data --------------------------------------------------------


def clifford_h0_max(ctx: CurveContext, e: int) -> int:
    """Upper bound for h^0 of a line bundle of degree e (Clifford / Riemann-Roch)."""
    g = ctx.genus
    if g < 1:
        raise DomainError(f"needs genus >= 1, got {g}")
    if e < 0:
        return 0
    if e <= 2 * g - 2:
        return floor_div(e, 2) + 1
    return e - g + 1


def c_coeff(ctx: CurveContext, tj: CSType, tl: CSType) -> int:
    """C_jl = n_j n_l (g-1) - n_j d_l + n_l d_j + k_j d_l - k_j n_l (g-1) - k_j k_l."""
    g = ctx.genus
    return (
        tj.n * tl.n * (g - 1)
        - tj.n * tl.d
        + tl.n * tj.d
        + tj.k * tl.d
        - tj.k * tl.n * (g - 1)
        - tj.k * tl.k
    )


def c_coeff_alt(ctx: CurveContext, tj: CSType, tl: CSType) -> int:
    """Factored form (k_j - n_j)(d_l - n_l(g-1)) + n_l d_j - k_j k_l."""
    g = ctx.genus
    return (tj.k - tj.n) * (tl.d - tl.n * (g - 1)) + tl.n * tj.d - tj.k * tl.k


def ext1_dim(ctx: CurveContext, pair: ExtPairData) -> int:
    """dim Ext^1 = C_12 + dim H^0 + dim H^2; an upper bound when the H terms are bounds."""
    return c_coeff(ctx, pair.t1, pair.t2) + pair.h0_bound + pair.h2_bound


def canonical_flip(ctx: CurveContext, n: int, d: int) -> FlipData:
    """Types of the extensions making up the flip at the top critical value.

    Quotient type (n-1, d2, n) with d2 = g + n - 1 - [g/n], sub type
    (1, d - d2, 1), at alpha = alpha_l.
    """
    a = alpha_l(ctx, n, d)
    if a <= 0:
        raise DomainError(
            f"alpha_l={a} <= 0: no top flip, G(alpha) = G_L for all alpha > 0",
            "Thm. 3.1",
        )
    g = ctx.genus
    d2 = g + n - 1 - floor_div(g, n)
    type2 = CSType(n - 1, d2, n)
    type1 = CSType(1, d - d2, 1)
    alpha = Fraction(a)
    if alpha_slope(type1, alpha) != alpha_slope(type2, alpha):
        raise ArithmeticError("slopes disagree at alpha_l")
    return FlipData(
        type1=type1,
        type2=type2,
        alpha=alpha,
        flip_dim_bound=beta_np1(ctx, n, d) - 1,
        c12=c_coeff(ctx, type1, type2),
        c21=c_coeff(ctx, type2, type1),
    )


# --- critical values -------------------------------------------------------


def _candidate_alpha(n: int, d: int, w: Witness) -> Fraction | None:
    k = n + 1
    den = n * w.k1 - w.n1 * k
    if den == 0:
        return None
    return Fraction(w.n1 * d - n * w.d1, den)


def critical_value_candidates(
    ctx: CurveContext, n: int, d: int
) -> list[CriticalValueCandidate]:
    """All alpha in (0, max(0, alpha_l)] where a subtype's alpha-slope equals the whole.

    This is a superset of the actual critical values; only the largest one,
    alpha_l, is certified to be actual.
    """
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")
    if n == 1:
        return []
    cap = max(0, alpha_l(ctx, n, d))
    if cap == 0:
        return []
    k = n + 1
    found: dict[Fraction, list[Witness]] = {}
    for n1 in range(1, n):
        for k1 in range(0, k + 1):
            den = n * k1 - n1 * k
            if den == 0:
                continue
            # alpha = (n1*d - n*d1)/den must lie in (0, cap]
            if den > 0:
                lo = ceil_div(n1 * d - cap * den, n)
                hi = floor_div(n1 * d - 1, n)
            else:
                lo = floor_div(n1 * d, n) + 1
                hi = floor_div(n1 * d - cap * den, n)
            for d1 in range(lo, hi + 1):
                w = Witness(n1, d1, k1)
                found.setdefault(_candidate_alpha(n, d, w), []).append(w)
    return [
        CriticalValueCandidate(alpha, tuple(sorted(ws)))
        for alpha, ws in sorted(found.items())
    ]


def dual_span_type(n: int, d: int) -> CSType:
    """Type of the dual of the kernel of V (x) O -> L for a generated (L, V) of type (1, d, n+1)."""
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")
    if d <= 0:
        raise DomainError(f"a generated line bundle needs degree > 0, got {d}")
    return CSType(n, d, n + 1)
