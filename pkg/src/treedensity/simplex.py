"""Exact and high-precision study of a pair-term ratio on the simplex.

For a point x = (x_1, ..., x_d) with nonnegative coordinates summing to 1,
the functional of interest is

    F(x) = sum_{i<j} (x_i x_j^(k-1) + x_j x_i^(k-1)) / (1 - sum_i x_i^k).

It is the limiting object behind caterpillar densities: the numerator tracks
splits that pair one leaf against a (k-1)-block, the denominator renormalizes
by everything that is not concentrated in a single coordinate. Facts this
module lets you verify numerically: F never exceeds 1/k on the simplex, the
supremum 1/k is approached (never attained) along boundary points
(0, ..., 0, eps, 1 - eps) as eps shrinks, and the minimum sits at the uniform
point with value (d - 1) / (d^(k-1) - 1). For d = 2 and k = 3 the functional
is identically 1/3.

Evaluation is exact over the rationals whenever the input coordinates are
ints or Fractions; otherwise it runs in mpmath arithmetic at the caller's
working precision. ``minimize_F`` uses a seeded multi-start Nelder-Mead at
128-bit precision (a log barrier keeps iterates interior, then a barrier-free
polish removes its bias). Muirhead-style majorization comparisons and the
power-sum decomposition used to bound F live here too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Sequence

import mpmath

from .errors import PreconditionError, SingularityError

__all__ = [
    "SimplexPoint",
    "simplex_point",
    "random_interior_point",
    "eval_F",
    "MinimizeResult",
    "minimize_F",
    "tangent_stationarity",
    "sup_boundary_scan",
    "uniform_min_value",
    "MajorizationPair",
    "majorization_pair",
    "symmetrized_power_sum",
    "muirhead_check",
    "exponent_compositions",
    "exponent_compositions_core",
    "multinomial",
    "verify_power_sum_decomposition",
]

_EXACT_TYPES = (int, Fraction)


@dataclass(frozen=True)
class SimplexPoint:
    """Coordinates on the standard simplex; ``exact`` marks rational mode."""

    coords: tuple
    exact: bool

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_interior(self) -> bool:
        return all(c > 0 for c in self.coords)


def simplex_point(coords: Iterable) -> SimplexPoint:
    """Validate and classify a coordinate tuple.

    All-int/Fraction input must sum to exactly 1; anything else is treated as
    real-valued and the sum may deviate by at most 1e-14.
    """
    xs = tuple(coords)
    if len(xs) < 2:
        raise PreconditionError("a simplex point needs at least two coordinates")
    exact = all(isinstance(c, _EXACT_TYPES) for c in xs)
    if exact:
        xs = tuple(Fraction(c) for c in xs)
        if any(c < 0 for c in xs):
            raise PreconditionError("simplex coordinates must be nonnegative")
        if sum(xs) != 1:
            raise PreconditionError(f"exact coordinates must sum to 1, got {sum(xs)}")
    else:
        xs = tuple(c if isinstance(c, mpmath.mpf) else mpmath.mpf(c) for c in xs)
        if any(c < 0 for c in xs):
            raise PreconditionError("simplex coordinates must be nonnegative")
        if abs(sum(xs) - 1) > mpmath.mpf("1e-14"):
            raise PreconditionError(f"coordinates must sum to 1 within 1e-14, got {sum(xs)}")
    return SimplexPoint(xs, exact)


def random_interior_point(d: int, rng: random.Random, scale: int = 10**6) -> SimplexPoint:
    """Exact interior point with coordinates a_i / sum(a), a_i uniform in 1..scale."""
    if d < 2:
        raise PreconditionError(f"need d >= 2, got {d}")
    weights = [rng.randint(1, scale) for _ in range(d)]
    total = sum(weights)
    return SimplexPoint(tuple(Fraction(w, total) for w in weights), True)


def _coerce_point(d: int, point) -> SimplexPoint:
    sp = point if isinstance(point, SimplexPoint) else simplex_point(point)
    if sp.dim != d:
        raise PreconditionError(f"point has {sp.dim} coordinates, expected d={d}")
    return sp


def eval_F(d: int, k: int, point):
    """Evaluate F at a simplex point: exact Fraction for rational input,
    mpmath float otherwise.

    Raises SingularityError when the denominator 1 - sum x_i^k vanishes,
    which happens exactly at the simplex corners.
    """
    if not isinstance(k, int) or k < 2:
        raise PreconditionError(f"need k >= 2, got {k!r}")
    sp = _coerce_point(d, point)
    xs = sp.coords
    powers = [x ** (k - 1) for x in xs]
    den = 1 - sum(p * x for p, x in zip(powers, xs))
    num = 0
    for i in range(d):
        for j in range(i + 1, d):
            num += xs[i] * powers[j] + xs[j] * powers[i]
    if sp.exact:
        if den == 0:
            raise SingularityError("denominator vanishes at a simplex corner")
        return Fraction(num, den)
    if den == 0:
        raise SingularityError("denominator vanishes at a simplex corner")
    return num / den


def uniform_min_value(d: int, k: int) -> Fraction:
    """Value of F at the uniform point: (d - 1) / (d^(k-1) - 1)."""
    if not isinstance(d, int) or d < 2 or not isinstance(k, int) or k < 2:
        raise PreconditionError(f"need integers d >= 2 and k >= 2, got d={d!r}, k={k!r}")
    return Fraction(d - 1, d ** (k - 1) - 1)


def sup_boundary_scan(d: int, k: int, eps_schedule: Sequence) -> list[Fraction]:
    """Exact values of F at (0, ..., 0, eps, 1 - eps) for each eps.

    Every eps must lie in (0, 1/2]. The values approach (but stay below) 1/k
    as eps decreases; asserting that is left to the caller since this
    function just evaluates.
    """
    values = []
    for eps in eps_schedule:
        e = Fraction(eps)
        if not 0 < e <= Fraction(1, 2):
            raise PreconditionError(f"eps must lie in (0, 1/2], got {eps!r}")
        coords = (Fraction(0),) * (d - 2) + (e, 1 - e)
        values.append(eval_F(d, k, coords))
    return values


# -- numerical minimization ---------------------------------------------------


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of :func:`minimize_F`.

    ``point`` is a real-mode SimplexPoint. ``stationarity`` is the largest
    absolute directional derivative along the tangent directions
    (e_i - e_j)/sqrt(2), estimated by central differences; near an interior
    minimum it should be tiny. ``converged`` is False when the evaluation
    budget ran out before the polish stage settled.
    """

    point: SimplexPoint
    value: object
    stationarity: object
    evaluations: int
    converged: bool


def _nelder_mead(f, x0, step, xtol, ftol, max_evals):
    """Plain Nelder-Mead over mpf vectors; returns (x, fx, evals, converged)."""
    dim = len(x0)
    one = mpmath.mpf(1)
    alpha, gamma, rho, sigma = one, 2 * one, one / 2, one / 2
    simplex = [list(x0)]
    for i in range(dim):
        v = list(x0)
        v[i] = v[i] + step
        simplex.append(v)
    fvals = [f(v) for v in simplex]
    evals = len(simplex)
    converged = False
    while evals < max_evals:
        order = sorted(range(dim + 1), key=lambda i: fvals[i])
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        spread_x = max(
            abs(simplex[i][j] - simplex[0][j]) for i in range(1, dim + 1) for j in range(dim)
        )
        if spread_x < xtol and abs(fvals[-1] - fvals[0]) < ftol:
            converged = True
            break
        centroid = [sum(simplex[i][j] for i in range(dim)) / dim for j in range(dim)]
        worst = simplex[-1]
        refl = [c + alpha * (c - w) for c, w in zip(centroid, worst)]
        f_refl = f(refl)
        evals += 1
        if fvals[0] <= f_refl < fvals[-2]:
            simplex[-1], fvals[-1] = refl, f_refl
            continue
        if f_refl < fvals[0]:
            expa = [c + gamma * (c - w) for c, w in zip(centroid, worst)]
            f_expa = f(expa)
            evals += 1
            if f_expa < f_refl:
                simplex[-1], fvals[-1] = expa, f_expa
            else:
                simplex[-1], fvals[-1] = refl, f_refl
            continue
        contr = [c + rho * (w - c) for c, w in zip(centroid, worst)]
        f_contr = f(contr)
        evals += 1
        if f_contr < fvals[-1]:
            simplex[-1], fvals[-1] = contr, f_contr
            continue
        best = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = [b + sigma * (v - b) for b, v in zip(best, simplex[i])]
            fvals[i] = f(simplex[i])
        evals += dim
    best_i = min(range(dim + 1), key=lambda i: fvals[i])
    return simplex[best_i], fvals[best_i], evals, converged


def _full_point(y):
    x = list(y)
    x.append(1 - sum(x))
    return x


def _barrier_objective(d, k, mu):
    inf = mpmath.inf

    def f(y):
        x = _full_point(y)
        if any(c <= 0 for c in x):
            return inf
        powers = [c ** (k - 1) for c in x]
        den = 1 - sum(p * c for p, c in zip(powers, x))
        if den <= 0:
            return inf
        num = sum(
            x[i] * powers[j] + x[j] * powers[i]
            for i in range(d)
            for j in range(i + 1, d)
        )
        val = num / den
        if mu:
            val -= mu * sum(mpmath.log(c) for c in x)
        return val

    return f


def tangent_stationarity(d: int, k: int, point, h=1e-5):
    """Max |directional derivative| of F along (e_i - e_j)/sqrt(2) directions,
    by central differences with step ``h``, in mpmath arithmetic."""
    sp = _coerce_point(d, point)
    xs = [
        mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c)
        for c in sp.coords
    ]
    hh = mpmath.mpf(h)
    u = 1 / mpmath.sqrt(2)
    worst = mpmath.mpf(0)
    obj = _barrier_objective(d, k, 0)
    for i, j in combinations(range(d), 2):
        plus = list(xs)
        minus = list(xs)
        plus[i] += hh * u
        plus[j] -= hh * u
        minus[i] -= hh * u
        minus[j] += hh * u
        deriv = (obj(plus[:-1]) - obj(minus[:-1])) / (2 * hh)
        worst = max(worst, abs(deriv))
    return worst


def minimize_F(
    d: int,
    k: int,
    *,
    starts: int = 8,
    budget: int = 100_000,
    seed: int = 0,
    prec: int = 128,
) -> MinimizeResult:
    """Seeded multi-start Nelder-Mead minimization of F over the open simplex.

    Each start runs with a small log barrier to stay interior, then the best
    candidate is polished barrier-free. Fixed ``seed`` gives a reproducible
    trajectory; ``budget`` caps total objective evaluations across stages,
    and running out of budget is reported as ``converged=False`` with the
    best point so far.
    """
    if not isinstance(d, int) or d < 2 or not isinstance(k, int) or k < 3:
        raise PreconditionError(f"need integers d >= 2 and k >= 3, got d={d!r}, k={k!r}")
    if starts < 1 or budget < (d + 1) * (starts + 1):
        raise PreconditionError("budget too small for the requested number of starts")
    rng = random.Random(seed)
    with mpmath.workprec(prec):
        mu = mpmath.mpf("1e-6")
        rough = _barrier_objective(d, k, mu)
        polish = _barrier_objective(d, k, 0)
        stage1_budget = budget // (2 * starts)
        evals_total = 0
        best_y = None
        best_f = mpmath.inf
        for _ in range(starts):
            weights = [mpmath.mpf(rng.random()) + mpmath.mpf("0.05") for _ in range(d)]
            total = sum(weights)
            y0 = [w / total for w in weights][: d - 1]
            y, fy, evals, _ = _nelder_mead(
                rough, y0, mpmath.mpf("0.05"), mpmath.mpf("1e-10"), mpmath.mpf("1e-14"),
                stage1_budget,
            )
            evals_total += evals
            if fy < best_f:
                best_f, best_y = fy, y
        remaining = max(budget - evals_total, (d + 1) * 4)
        y, fy, evals, converged = _nelder_mead(
            polish, best_y, mpmath.mpf("1e-7"), mpmath.mpf("1e-16"), mpmath.mpf("1e-28"),
            remaining,
        )
        evals_total += evals
        point = simplex_point(_full_point(y))
        value = polish(y)
        resid = tangent_stationarity(d, k, point, h=mpmath.mpf("1e-5"))
    return MinimizeResult(point, value, resid, evals_total, converged)


# -- majorization and power-sum identities ------------------------------------


@dataclass(frozen=True)
class MajorizationPair:
    """Exponent vectors a, b (sorted descending) with a majorizing b."""

    a: tuple[int, ...]
    b: tuple[int, ...]


def majorization_pair(a: Iterable[int], b: Iterable[int]) -> MajorizationPair:
    """Validate that a majorizes b: equal lengths and sums, and every prefix
    sum of the descending a dominates that of b."""
    ta = tuple(sorted(a, reverse=True))
    tb = tuple(sorted(b, reverse=True))
    if len(ta) != len(tb) or not ta:
        raise PreconditionError("majorization needs two equal-length nonempty vectors")
    if sum(ta) != sum(tb):
        raise PreconditionError(f"sums differ: {sum(ta)} vs {sum(tb)}")
    pa = pb = 0
    for va, vb in zip(ta[:-1], tb[:-1]):
        pa += va
        pb += vb
        if pa < pb:
            raise PreconditionError(f"{ta} does not majorize {tb}")
    return MajorizationPair(ta, tb)


def symmetrized_power_sum(exponents: Sequence[int], values: Sequence):
    """sum over all permutations sigma of prod_i values[sigma(i)]^exponents[i].

    The full symmetric group is used (repeated exponents are not collapsed),
    matching the classical majorization inequality setting.
    """
    n = len(exponents)
    if n != len(values):
        raise PreconditionError("need as many values as exponents")
    total = 0
    for perm in permutations(range(n)):
        prod = 1
        for e, idx in zip(exponents, perm):
            prod *= values[idx] ** e
        total += prod
    return total


def muirhead_check(pair: MajorizationPair, values: Sequence) -> bool:
    """True when the symmetrized power sum for pair.a dominates that of pair.b
    at the given positive values. Exact for rational input."""
    if len(values) != len(pair.a):
        raise PreconditionError("need as many values as exponent entries")
    if any(v <= 0 for v in values):
        raise PreconditionError("majorization comparison needs positive values")
    return symmetrized_power_sum(pair.a, values) >= symmetrized_power_sum(pair.b, values)


def multinomial(k: int, parts: Sequence[int]) -> int:
    """k! / prod(parts!) for nonnegative parts summing to k."""
    if any(p < 0 for p in parts) or sum(parts) != k:
        raise PreconditionError(f"parts must be nonnegative and sum to {k}, got {parts!r}")
    out = factorial(k)
    for p in parts:
        out //= factorial(p)
    return out


def exponent_compositions(d: int, k: int) -> list[tuple[int, ...]]:
    """All d-tuples of nonnegative integers summing to k with no entry equal
    to k (no corner terms), in lexicographic order."""
    if d < 2 or k < 1:
        raise PreconditionError(f"need d >= 2 and k >= 1, got d={d!r}, k={k!r}")
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int):
        if len(prefix) == d - 1:
            v = prefix + (remaining,)
            if k not in v:
                out.append(v)
            return
        for c in range(remaining + 1):
            rec(prefix + (c,), remaining - c)

    rec((), k)
    return out


def exponent_compositions_core(d: int, k: int) -> list[tuple[int, ...]]:
    """The compositions of :func:`exponent_compositions` minus the pair terms,
    i.e. minus every rearrangement of (k-1, 1, 0, ..., 0)."""
    pair_shape = tuple(sorted((k - 1, 1) + (0,) * (d - 2), reverse=True))
    return [
        v
        for v in exponent_compositions(d, k)
        if tuple(sorted(v, reverse=True)) != pair_shape
    ]


def verify_power_sum_decomposition(coords: Sequence, k: int) -> bool:
    """Exact identity splitting the denominator of F into core and pair terms:

        1 - sum_i x_i^k
            = sum_{v in core} multinomial(k, v) prod_i x_i^(v_i)
              + k * sum_{i<j} (x_i x_j^(k-1) + x_j x_i^(k-1))

    for any exact simplex point. The pair terms carry coefficient
    multinomial(k, (k-1, 1)) = k, which is where the factor k in the global
    bound F <= 1/k comes from.
    """
    sp = simplex_point(coords)
    if not sp.exact:
        raise PreconditionError("the decomposition check needs exact coordinates")
    xs = sp.coords
    d = len(xs)
    lhs = 1 - sum(x**k for x in xs)
    rhs = Fraction(0)
    for v in exponent_compositions_core(d, k):
        term = Fraction(multinomial(k, v))
        for x, e in zip(xs, v):
            if e:
                term *= x**e
        rhs += term
    pair_sum = sum(
        xs[i] * xs[j] ** (k - 1) + xs[j] * xs[i] ** (k - 1)
        for i in range(d)
        for j in range(i + 1, d)
    )
    rhs += k * pair_sum
    return lhs == rhs
