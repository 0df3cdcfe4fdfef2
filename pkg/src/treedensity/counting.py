"""Counting copies of leaf-induced subtree patterns, exactly.

Selecting a set S of leaves of a tree T induces a smaller tree: take the
minimal subtree spanning S and the root paths down to it, then suppress every
vertex that is left with a single child. ``induced_subtree`` performs that
operation. For a pattern D, c(D, T) is the number of leaf subsets of T whose
induced tree is isomorphic to D; the density of D in T divides c(D, T) by the
number of subsets of that size, so it always lands in [0, 1].

Two independent routes to c(D, T) live here. ``count_copies_brute`` walks
every subset and is the ground truth at small sizes. ``count_copies`` runs a
branch decomposition: a copy of D either sits inside a single branch of T, or
its root is the root of T and each branch of D is induced inside a distinct
branch of T. The cross term enumerates, per choice of |D|-many branches of T,
the distinct ways to assign D's branch isomorphism classes to them
(:func:`branch_pattern` precomputes those assignments).

``caterpillar_counts`` specializes the recursion to binary caterpillar
patterns of every size up to k in one bottom-up pass, which is what the
extremal search loops on.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import BudgetError, PreconditionError
from .trees import Tree, leaf, node

__all__ = [
    "induced_subtree",
    "count_copies_brute",
    "brute_copy_profile",
    "BranchPattern",
    "branch_pattern",
    "CopyEngine",
    "count_copies",
    "density",
    "CountVector",
    "caterpillar_counts",
    "combine_caterpillar_counts",
    "DEFAULT_SUBSET_CAP",
]

DEFAULT_SUBSET_CAP = 10**8


def induced_subtree(t: Tree, leaves: Iterable[int]) -> Tree:
    """Tree induced by the given leaf indices of ``t``.

    Leaves are numbered 0..t.leaf_count-1 in depth-first (canonical) order.
    The argument must be a nonempty collection of valid indices; duplicates
    are tolerated. A single index induces the one-leaf tree.
    """
    sel = sorted(set(leaves))
    if not sel:
        raise PreconditionError("need at least one leaf index")
    if sel[0] < 0 or sel[-1] >= t.leaf_count:
        raise PreconditionError(
            f"leaf indices must lie in [0, {t.leaf_count - 1}], got {sel[0]}..{sel[-1]}"
        )

    def go(u: Tree, base: int) -> Tree | None:
        lo = bisect_left(sel, base)
        hi = bisect_left(sel, base + u.leaf_count)
        if lo == hi:
            return None
        if u.is_leaf:
            return leaf()
        kids = []
        off = base
        for c in u.children:
            sub = go(c, off)
            if sub is not None:
                kids.append(sub)
            off += c.leaf_count
        if len(kids) == 1:
            return kids[0]  # suppress the pass-through vertex
        return node(kids)

    result = go(t, 0)
    assert result is not None
    return result


def _check_subset_budget(n: int, k: int, max_subsets: int, force: bool) -> None:
    total = comb(n, k)
    if total > max_subsets and not force:
        raise BudgetError(
            f"brute-force enumeration of C({n},{k}) = {total} subsets exceeds "
            f"the cap of {max_subsets}; pass force=True to run anyway"
        )


def count_copies_brute(
    d_pattern: Tree,
    t: Tree,
    *,
    max_subsets: int = DEFAULT_SUBSET_CAP,
    force: bool = False,
) -> int:
    """c(D, T) by enumerating every |D|-subset of T's leaves.

    Exponential and intended as an oracle at small sizes only; refuses with
    BudgetError when C(|T|, |D|) exceeds ``max_subsets`` unless forced.
    """
    k = d_pattern.leaf_count
    n = t.leaf_count
    if k > n:
        return 0
    _check_subset_budget(n, k, max_subsets, force)
    target = d_pattern.code
    return sum(
        1
        for subset in combinations(range(n), k)
        if induced_subtree(t, subset).code == target
    )


def brute_copy_profile(
    t: Tree,
    k: int,
    *,
    max_subsets: int = DEFAULT_SUBSET_CAP,
    force: bool = False,
) -> dict[str, int]:
    """Tally {pattern code: copies} over all k-subsets of T's leaves.

    One pass shared by every pattern of size k; the counts sum to C(n, k).
    """
    n = t.leaf_count
    if k < 1:
        raise PreconditionError(f"subset size must be >= 1, got {k}")
    if k > n:
        return {}
    _check_subset_budget(n, k, max_subsets, force)
    tally: dict[str, int] = {}
    for subset in combinations(range(n), k):
        code = induced_subtree(t, subset).code
        tally[code] = tally.get(code, 0) + 1
    return tally


@dataclass(frozen=True)
class BranchPattern:
    """Root branch structure of a pattern D, preprocessed for the cross term.

    ``class_reps`` lists the distinct branch shapes (canonical order) and
    ``multiplicities`` how often each occurs. ``assignments`` holds every
    distinct sequence of branch shapes of length ``len(branches)``; its size
    is the multinomial coefficient r! / (m_1! ... m_c!).
    """

    branches: tuple[Tree, ...]
    class_reps: tuple[Tree, ...]
    multiplicities: tuple[int, ...]
    assignments: tuple[tuple[Tree, ...], ...]


def _distinct_sequences(mults: Sequence[int]):
    total = sum(mults)
    remaining = list(mults)
    seq: list[int] = []

    def rec():
        if len(seq) == total:
            yield tuple(seq)
            return
        for ci in range(len(remaining)):
            if remaining[ci]:
                remaining[ci] -= 1
                seq.append(ci)
                yield from rec()
                seq.pop()
                remaining[ci] += 1

    yield from rec()


def branch_pattern(d_pattern: Tree) -> BranchPattern:
    """Precompute branch classes and distinct assignments for a pattern root."""
    if d_pattern.is_leaf:
        raise PreconditionError("a leaf has no branch structure")
    reps: list[Tree] = []
    mults: list[int] = []
    for b in d_pattern.children:  # children arrive sorted, equal codes adjacent
        if reps and reps[-1].code == b.code:
            mults[-1] += 1
        else:
            reps.append(b)
            mults.append(1)
    assignments = tuple(
        tuple(reps[ci] for ci in idx_seq) for idx_seq in _distinct_sequences(mults)
    )
    return BranchPattern(d_pattern.children, tuple(reps), tuple(mults), assignments)


class CopyEngine:
    """Memoized copy counter over (pattern, tree) pairs.

    One engine instance shares its memo across queries, which matters when
    sweeping many trees with overlapping subtrees. The memo is keyed by
    canonical codes and only ever grows; call :meth:`clear` to reset.
    """

    def __init__(self):
        self._memo: dict[tuple[str, str], int] = {}
        self._patterns: dict[str, BranchPattern] = {}

    def clear(self) -> None:
        self._memo.clear()
        self._patterns.clear()

    def _pattern(self, d_pattern: Tree) -> BranchPattern:
        bp = self._patterns.get(d_pattern.code)
        if bp is None:
            bp = branch_pattern(d_pattern)
            self._patterns[d_pattern.code] = bp
        return bp

    def count(self, d_pattern: Tree, t: Tree) -> int:
        """Number of leaf subsets of ``t`` inducing a copy of ``d_pattern``."""
        if d_pattern.is_leaf:
            return t.leaf_count
        if d_pattern.leaf_count > t.leaf_count or t.is_leaf:
            return 0
        key = (d_pattern.code, t.code)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        total = 0
        for branch in t.children:
            total += self.count(d_pattern, branch)
        bp = self._pattern(d_pattern)
        r = len(bp.branches)
        if r <= len(t.children):
            for host_branches in combinations(t.children, r):
                for assignment in bp.assignments:
                    prod = 1
                    for shape, host in zip(assignment, host_branches):
                        prod *= self.count(shape, host)
                        if not prod:
                            break
                    total += prod
        self._memo[key] = total
        return total

    def density(self, d_pattern: Tree, t: Tree) -> Fraction:
        k = d_pattern.leaf_count
        n = t.leaf_count
        if n < k:
            raise PreconditionError(
                f"density needs at least as many tree leaves ({n}) as pattern leaves ({k})"
            )
        return Fraction(self.count(d_pattern, t), comb(n, k))


_default_engine = CopyEngine()


def count_copies(d_pattern: Tree, t: Tree) -> int:
    """c(D, T) via the branch decomposition, memoized in a shared engine."""
    return _default_engine.count(d_pattern, t)


def density(d_pattern: Tree, t: Tree) -> Fraction:
    """c(D, T) / C(|T|, |D|) as an exact fraction. Requires |T| >= |D|."""
    return _default_engine.density(d_pattern, t)


@dataclass(frozen=True)
class CountVector:
    """Copies of every binary caterpillar size 2..k in one n-leaf tree.

    ``counts[j - 2]`` is the number of j-leaf binary caterpillar copies;
    indexing the object with j does the shift for you.
    """

    n: int
    k: int
    counts: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        if not 2 <= j <= self.k:
            raise IndexError(f"caterpillar size must be in [2, {self.k}], got {j}")
        return self.counts[j - 2]


def combine_caterpillar_counts(
    parts: Sequence[tuple[int, Sequence[int]]], k: int
) -> tuple[int, ...]:
    """Caterpillar counts of a tree from those of its root branches.

    ``parts`` holds (leaf_count, counts c_2..c_k) per branch. Every pair of
    leaves induces a cherry, so c_2 is C(n, 2) outright. For j >= 3 a copy
    either lies inside one branch or pairs a leaf from one branch with a
    (j-1)-caterpillar from a different branch:

        c_j = sum_i c_j(T_i) + sum_i (n - n_i) * c_{j-1}(T_i).

    The output is monotone in every input coordinate, which is what lets a
    Pareto frontier search discard dominated branch vectors safely.
    """
    if k < 2:
        raise PreconditionError(f"need k >= 2, got {k}")
    if len(parts) < 2:
        raise PreconditionError("a combine needs at least two branches")
    n = sum(ni for ni, _ in parts)
    out = [0] * (k - 1)
    out[0] = comb(n, 2)
    for j in range(3, k + 1):
        idx = j - 2
        acc = 0
        for ni, vec in parts:
            acc += vec[idx] + (n - ni) * vec[idx - 1]
        out[idx] = acc
    return tuple(out)


_cat_cache: dict[tuple[str, int], tuple[int, ...]] = {}


def caterpillar_counts(t: Tree, k: int) -> CountVector:
    """CountVector of binary caterpillar copies in ``t`` for sizes 2..k.

    Runs bottom-up over the distinct subtrees of ``t`` and memoizes per
    (subtree code, k) at module level, so sweeps over many related trees pay
    for each shape once.
    """
    if k < 2:
        raise PreconditionError(f"need k >= 2, got {k}")
    key = (t.code, k)
    if key not in _cat_cache:
        distinct: dict[str, Tree] = {}
        stack = [t]
        while stack:
            u = stack.pop()
            if u.code not in distinct:
                distinct[u.code] = u
                stack.extend(u.children)
        leaf_vec = (0,) * (k - 1)
        for u in sorted(distinct.values(), key=lambda v: v.leaf_count):
            ukey = (u.code, k)
            if ukey in _cat_cache:
                continue
            if u.is_leaf:
                _cat_cache[ukey] = leaf_vec
            else:
                parts = [(c.leaf_count, _cat_cache[(c.code, k)]) for c in u.children]
                _cat_cache[ukey] = combine_caterpillar_counts(parts, k)
    return CountVector(t.leaf_count, k, _cat_cache[key])
