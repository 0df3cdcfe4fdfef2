"""Enumeration of d-ary trees and extremal searches over them.

``enumerate_trees`` streams every isomorphism type of d-ary tree with a given
leaf count exactly once, built bottom-up from cached smaller levels, so that
exhaustive minimization (``min_density_exhaustive``) is a straight scan.
``count_trees`` evaluates the same recurrence without building anything and
is used both for budget refusals and as a cross-check on the enumerator.

The two verification sweeps wrap the searches into reports:

* ``verify_even_conjecture`` compares the exact minimum caterpillar count per
  leaf count (from the Pareto frontier DP) against the recursively even-split
  binary tree.
* ``verify_monotone_min`` checks that the minimum caterpillar density is
  nondecreasing in the leaf count and never exceeds its closed-form limit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

from . import frontier as frontier_mod
from .counting import caterpillar_counts
from .errors import BudgetError, PreconditionError
from .formulas import liminf_density
from .reporting import SearchReport
from .trees import Tree, is_strictly_d_ary, leaf, make_even_binary, node, parse_tree

__all__ = [
    "count_trees",
    "enumerate_trees",
    "min_density_exhaustive",
    "search_min_report",
    "verify_even_conjecture",
    "verify_monotone_min",
    "DEFAULT_TREE_CAP",
]

DEFAULT_TREE_CAP = 10**6

SEARCH_COLUMNS = ("n", "min_count", "min_density_num", "min_density_den", "argmin_code")


def _check_n_d(n: int, d: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise PreconditionError(f"leaf count must be an integer >= 1, got {n!r}")
    if not isinstance(d, int) or d < 2:
        raise PreconditionError(f"arity bound must be an integer >= 2, got {d!r}")


def _grouped_partitions(n: int, m: int):
    """Partitions of n into m nondecreasing positive parts, as (size, count)
    run-length groups."""
    for sizes in frontier_mod._partitions_into_parts(n, m):
        groups: list[tuple[int, int]] = []
        for s in sizes:
            if groups and groups[-1][0] == s:
                groups[-1] = (s, groups[-1][1] + 1)
            else:
                groups.append((s, 1))
        yield groups


_count_cache: dict[tuple[int, int, bool], int] = {}


def count_trees(n: int, d: int, strict: bool = False) -> int:
    """Number of isomorphism types of d-ary trees with n leaves.

    ``strict`` restricts every internal outdegree to exactly d. Branch
    multisets are counted with multiset coefficients, so this matches the
    length of :func:`enumerate_trees` without materializing any tree.
    """
    _check_n_d(n, d)
    if n == 1:
        return 1
    key = (n, d, strict)
    cached = _count_cache.get(key)
    if cached is not None:
        return cached
    total = 0
    arities = (d,) if strict else range(2, min(d, n) + 1)
    for m in arities:
        if m > n:
            continue
        for groups in _grouped_partitions(n, m):
            ways = 1
            for size, cnt in groups:
                ways *= comb(count_trees(size, d, strict) + cnt - 1, cnt)
                if not ways:
                    break
            total += ways
    _count_cache[key] = total
    return total


_level_cache: dict[tuple[int, int, bool], tuple[Tree, ...]] = {}


def _tree_level(n: int, d: int, strict: bool, max_trees: int) -> tuple[Tree, ...]:
    key = (n, d, strict)
    # budget first, even on a warm cache: the refusal contract must not
    # depend on what earlier calls happened to enumerate
    total = count_trees(n, d, strict)
    if total > max_trees:
        raise BudgetError(
            f"enumerating {total} {'strictly ' if strict else ''}{d}-ary trees "
            f"with {n} leaves exceeds the cap of {max_trees}"
        )
    cached = _level_cache.get(key)
    if cached is not None:
        return cached
    if n == 1:
        level: tuple[Tree, ...] = (leaf(),)
    else:
        from itertools import combinations_with_replacement, product

        built: list[Tree] = []
        arities = (d,) if strict else range(2, min(d, n) + 1)
        for m in arities:
            if m > n:
                continue
            for groups in _grouped_partitions(n, m):
                pools = [
                    combinations_with_replacement(_tree_level(s, d, strict, max_trees), cnt)
                    for s, cnt in groups
                ]
                for pick in product(*pools):
                    kids: list[Tree] = []
                    for chunk in pick:
                        kids.extend(chunk)
                    built.append(node(kids))
        built.sort(key=lambda t: (len(t.code), t.code))
        level = tuple(built)
    assert len(level) == total
    _level_cache[key] = level
    return level


def enumerate_trees(
    n: int, d: int, strict: bool = False, *, max_trees: int = DEFAULT_TREE_CAP
) -> Iterator[Tree]:
    """Every d-ary tree with n leaves, one representative per isomorphism
    type, in a fixed (code-sorted) order.

    Levels are cached, so repeated sweeps over the same sizes are cheap.
    Refuses with BudgetError, naming the count, when more than ``max_trees``
    trees would be generated at any level. Strictly d-ary trees exist only
    for n = 1 mod (d - 1); asking for other sizes in strict mode is an error.
    """
    _check_n_d(n, d)
    if strict and (n - 1) % (d - 1) != 0:
        raise PreconditionError(
            f"no strictly {d}-ary tree has {n} leaves (need n = 1 mod {d - 1})"
        )
    return iter(_tree_level(n, d, strict, max_trees))


_ARGMIN_KEEP = 1000  # witnesses stored per record before truncation


@dataclass(frozen=True)
class MinRecord:
    """Minimum k-caterpillar count among the searched n-leaf trees.

    ``argmin_codes`` lists every witness attaining the minimum in enumeration
    order (truncated to the first 1000; ``argmin_total`` is the true count).
    """

    n: int
    k: int
    min_count: int
    density: Fraction
    argmin_codes: tuple[str, ...]
    argmin_total: int
    trees_scanned: int


def _min_record(
    n: int, d: int, k: int, *, strict: bool, max_trees: int
) -> MinRecord:
    best: int | None = None
    codes: list[str] = []
    ties = 0
    scanned = 0
    for t in enumerate_trees(n, d, strict, max_trees=max_trees):
        scanned += 1
        c = caterpillar_counts(t, k)[k]
        if best is None or c < best:
            best, codes, ties = c, [t.code], 1
        elif c == best:
            ties += 1
            if ties <= _ARGMIN_KEEP:
                codes.append(t.code)
    if best is None:
        raise PreconditionError(
            f"no {'strictly ' if strict else ''}{d}-ary tree with {n} leaves exists"
        )
    # Witness sanity: re-counting the reported codes must reproduce the count.
    for code in codes[:4]:
        assert caterpillar_counts(parse_tree(code), k)[k] == best
    return MinRecord(n, k, best, Fraction(best, comb(n, k)), tuple(codes), ties, scanned)


def min_density_exhaustive(
    n: int,
    d: int,
    k: int,
    *,
    strict: bool = False,
    max_trees: int = DEFAULT_TREE_CAP,
) -> SearchReport:
    """Scan every d-ary (or strictly d-ary) tree with n leaves and report the
    minimum k-caterpillar count and density, with one witness code."""
    if not isinstance(k, int) or k < 2:
        raise PreconditionError(f"caterpillar size must be an integer >= 2, got {k!r}")
    _check_n_d(n, d)
    if n < k:
        raise PreconditionError(f"need n >= k, got n={n} < k={k}")
    start = time.perf_counter()
    rec = _min_record(n, d, k, strict=strict, max_trees=max_trees)
    report = SearchReport(
        mode="search-min-strict" if strict else "search-min",
        params={"d": d, "k": k, "n": n, "method": "exhaustive"},
        columns=SEARCH_COLUMNS,
        rows=[
            (
                rec.n,
                rec.min_count,
                rec.density.numerator,
                rec.density.denominator,
                rec.argmin_codes[0],
            )
        ],
        wall_time=time.perf_counter() - start,
    )
    report.notes.append(
        f"{rec.trees_scanned} trees scanned, {rec.argmin_total} attain the minimum"
    )
    if rec.argmin_total > 1:
        shown = ";".join(rec.argmin_codes)
        suffix = "" if rec.argmin_total <= len(rec.argmin_codes) else " (truncated)"
        report.notes.append(f"argmin codes: {shown}{suffix}")
    return report


def search_min_report(
    d: int,
    k: int,
    n_min: int,
    n_max: int,
    *,
    method: str = "auto",
    strict: bool = False,
    max_trees: int = DEFAULT_TREE_CAP,
    cache_dir=None,
    allow_general_d: bool = False,
) -> SearchReport:
    """Minimum count/density per leaf count over n_min..n_max.

    ``method`` is "exhaustive", "pareto", or "auto" (pareto for binary hosts,
    exhaustive otherwise). The pareto route scales to large n but covers the
    non-strict family only.
    """
    if not isinstance(k, int) or k < 2:
        raise PreconditionError(f"caterpillar size must be an integer >= 2, got {k!r}")
    _check_n_d(n_max, d)
    if n_min < k:
        raise PreconditionError(f"need n_min >= k, got {n_min} < {k}")
    if n_min > n_max:
        raise PreconditionError(f"need n_min <= n_max, got {n_min} > {n_max}")
    if method == "auto":
        method = "pareto" if d == 2 and k >= 3 else "exhaustive"
    if method not in ("pareto", "exhaustive"):
        raise PreconditionError(f"unknown search method {method!r}")
    start = time.perf_counter()
    rows = []
    if method == "pareto":
        if strict and d > 2:
            raise PreconditionError(
                "the pareto method covers the non-strict family; use exhaustive "
                "for strictly d-ary hosts with d > 2"
            )
        fronts = frontier_mod.pareto_min_counts(
            n_max, k, d, allow_general_d=allow_general_d, cache_dir=cache_dir
        )
        for n in range(n_min, n_max + 1):
            entry = fronts.argmin_entry(n)
            c = entry.vector[-1]
            if entry.witness is not None:
                assert caterpillar_counts(parse_tree(entry.witness), k)[k] == c
            q = Fraction(c, comb(n, k))
            rows.append((n, c, q.numerator, q.denominator, entry.witness or ""))
    else:
        for n in range(n_min, n_max + 1):
            if strict and (n - 1) % (d - 1) != 0:
                continue  # no strictly d-ary tree of this size
            rec = _min_record(n, d, k, strict=strict, max_trees=max_trees)
            rows.append(
                (rec.n, rec.min_count, rec.density.numerator, rec.density.denominator, rec.argmin_codes[0])
            )
    return SearchReport(
        mode="search-min-strict" if strict else "search-min",
        params={"d": d, "k": k, "n_min": n_min, "n_max": n_max, "method": method},
        columns=SEARCH_COLUMNS,
        rows=rows,
        wall_time=time.perf_counter() - start,
    )


def verify_even_conjecture(
    k: int, n_max: int, *, cache_dir=None
) -> SearchReport:
    """Check, for every n up to n_max, that the even-split binary tree attains
    the exact minimum k-caterpillar count among binary trees with n leaves.

    The minimum comes from the Pareto frontier DP; the even tree's count is
    computed independently by the branch recursion. The report's verdict is
    true only if they agree at every n.
    """
    if not isinstance(k, int) or k < 3:
        raise PreconditionError(f"caterpillar size must be an integer >= 3, got {k!r}")
    if not isinstance(n_max, int) or n_max < k:
        raise PreconditionError(f"need n_max >= k, got {n_max!r}")
    start = time.perf_counter()
    fronts = frontier_mod.pareto_min_counts(n_max, k, 2, cache_dir=cache_dir)
    rows = []
    all_ok = True
    for n in range(k, n_max + 1):
        dp_min = fronts.min_count(n)
        even_count = caterpillar_counts(make_even_binary(n), k)[k]
        ok = dp_min == even_count
        all_ok = all_ok and ok
        rows.append((n, dp_min, even_count, ok))
    return SearchReport(
        mode="conjecture",
        params={"d": 2, "k": k, "n_min": k, "n_max": n_max},
        columns=("n", "min_count", "even_count", "verdict"),
        rows=rows,
        all_ok=all_ok,
        wall_time=time.perf_counter() - start,
    )


def verify_monotone_min(
    d: int,
    k: int,
    n_max: int,
    *,
    method: str = "auto",
    max_trees: int = DEFAULT_TREE_CAP,
    cache_dir=None,
) -> SearchReport:
    """Check that the minimum k-caterpillar density over d-ary trees is
    nondecreasing in n and stays at or below its closed-form limit."""
    if not isinstance(k, int) or k < 3:
        raise PreconditionError(f"caterpillar size must be an integer >= 3, got {k!r}")
    if not isinstance(n_max, int) or n_max < k:
        raise PreconditionError(f"need n_max >= k, got {n_max!r}")
    base = search_min_report(
        d,
        k,
        k,
        n_max,
        method=method,
        max_trees=max_trees,
        cache_dir=cache_dir,
        allow_general_d=True,
    )
    start = time.perf_counter()
    limit = liminf_density(d, k)
    rows = []
    all_ok = True
    prev: Fraction | None = None
    for n, min_count, num, den, _code in base.rows:
        dens = Fraction(num, den)
        nondecreasing = prev is None or dens >= prev
        bounded = dens <= limit
        all_ok = all_ok and nondecreasing and bounded
        rows.append((n, min_count, num, den, nondecreasing, bounded))
        prev = dens
    return SearchReport(
        mode="monotone",
        params={"d": d, "k": k, "n_min": k, "n_max": n_max, "limit": str(limit)},
        columns=("n", "min_count", "min_density_num", "min_density_den", "nondecreasing", "le_liminf"),
        rows=rows,
        all_ok=all_ok,
        wall_time=base.wall_time + time.perf_counter() - start,
    )
