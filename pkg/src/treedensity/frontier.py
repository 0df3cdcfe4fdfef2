"""Pareto-frontier dynamic program for minimum caterpillar counts.

The combiner in :func:`treedensity.counting.combine_caterpillar_counts` is
monotone: raising any branch count c_j(T_i) can only raise the counts of the
combined tree. So when minimizing c_k over all d-ary trees with n leaves, a
branch whose count vector (c_3, ..., c_k) is componentwise dominated by
another branch of the same leaf count can never help and may be discarded.
(c_2 is C(n, 2) for every n-leaf tree, so it carries no information and is
not stored.)

The DP therefore keeps, per leaf count n, only the Pareto-minimal count
vectors over all d-ary trees with n leaves, each with a provenance pointer
for reconstructing one witness tree. Level n is built by combining frontier
entries over every branch-size multiset of n into 2..d parts; pruning uses
weak dominance after a lexicographic sort, which both deduplicates and keeps
the frontier deterministic. The minimum of the last coordinate over a level
is the exact minimum of c_k among all d-ary trees with that many leaves.

Frontiers can be persisted as JSON lines, one file per (d, k, n), which makes
long sweeps resumable and their outputs byte-reproducible.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb
from pathlib import Path
from typing import Sequence

from .counting import combine_caterpillar_counts
from .errors import BudgetError, CacheError, PreconditionError

__all__ = [
    "FrontierEntry",
    "ParetoFrontiers",
    "ParetoDP",
    "pareto_min_counts",
    "pareto_minimal",
    "DEFAULT_FRONTIER_CAP",
    "DEFAULT_CANDIDATE_CAP",
]

DEFAULT_FRONTIER_CAP = 10**6
DEFAULT_CANDIDATE_CAP = 5 * 10**6
_WITNESS_CAP = 10_000  # above this many entries, only the argmin gets a witness string


def pareto_minimal(vectors: Sequence[tuple[int, ...]]) -> list[int]:
    """Indices of the weakly-Pareto-minimal vectors, in lexicographic order.

    Exact duplicates keep their first occurrence (the sort is stable), so the
    result is deterministic for a deterministic candidate order. A vector is
    dropped exactly when some kept vector is <= it in every coordinate.
    """
    order = sorted(range(len(vectors)), key=vectors.__getitem__)
    kept: list[tuple[int, ...]] = []
    kept_idx: list[int] = []
    for i in order:
        v = vectors[i]
        if any(all(u[t] <= v[t] for t in range(len(v))) for u in kept):
            continue
        kept.append(v)
        kept_idx.append(i)
    return kept_idx


@dataclass(frozen=True)
class FrontierEntry:
    """One Pareto-minimal count vector (c_3..c_k) with an optional witness code."""

    n: int
    vector: tuple[int, ...]
    witness: str | None


class _Level:
    __slots__ = ("vectors", "parents", "witnesses")

    def __init__(self, vectors, parents=None, witnesses=None):
        self.vectors: list[tuple[int, ...]] = vectors
        # parents[i] is a tuple of (branch_size, branch_index) pairs, or None
        # when the level was loaded from cache and carries witness strings.
        self.parents = parents
        self.witnesses = witnesses


class ParetoFrontiers:
    """Per-leaf-count Pareto frontiers produced by :class:`ParetoDP`."""

    def __init__(self, k: int, d: int):
        self.k = k
        self.d = d
        self._levels: dict[int, _Level] = {}
        self._witness_memo: dict[tuple[int, int], str | None] = {}

    def max_n(self) -> int:
        return max(self._levels) if self._levels else 0

    def frontier_size(self, n: int) -> int:
        return len(self._levels[n].vectors)

    def vectors(self, n: int) -> list[tuple[int, ...]]:
        return list(self._levels[n].vectors)

    def min_count(self, n: int) -> int:
        """Exact minimum of c_k over d-ary trees with n leaves."""
        return min(v[-1] for v in self._levels[n].vectors)

    def argmin_index(self, n: int) -> int:
        level = self._levels[n]
        return min(range(len(level.vectors)), key=lambda i: (level.vectors[i][-1], level.vectors[i]))

    def witness_code(self, n: int, i: int) -> str | None:
        key = (n, i)
        if key in self._witness_memo:
            return self._witness_memo[key]
        level = self._levels[n]
        if level.witnesses is not None:
            code = level.witnesses[i]
        elif n == 1:
            code = "*"
        else:
            parts = [self.witness_code(size, idx) for size, idx in level.parents[i]]
            if any(p is None for p in parts):
                code = None
            else:
                parts.sort(key=lambda c: (len(c), c))
                code = "(" + "".join(parts) + ")"
        self._witness_memo[key] = code
        return code

    def entries(self, n: int) -> list[FrontierEntry]:
        level = self._levels[n]
        return [
            FrontierEntry(n, vec, self.witness_code(n, i))
            for i, vec in enumerate(level.vectors)
        ]

    def argmin_entry(self, n: int) -> FrontierEntry:
        i = self.argmin_index(n)
        return FrontierEntry(n, self._levels[n].vectors[i], self.witness_code(n, i))


def _partitions_into_parts(n: int, m: int):
    """Nondecreasing positive integer m-tuples summing to n."""

    def rec(remaining, parts_left, minimum):
        if parts_left == 1:
            if remaining >= minimum:
                yield (remaining,)
            return
        for first in range(minimum, remaining // parts_left + 1):
            for rest in rec(remaining - first, parts_left - 1, first):
                yield (first,) + rest

    yield from rec(n, m, 1)


class ParetoDP:
    """Builds caterpillar-count frontiers level by level.

    ``run(n_max)`` fills levels 1..n_max and may be called repeatedly with
    growing bounds; existing levels are reused. With a ``cache_dir`` the
    levels are read from and written to JSON-lines files keyed by (d, k, n),
    so an interrupted sweep resumes where it stopped.
    """

    def __init__(
        self,
        k: int,
        d: int = 2,
        *,
        frontier_cap: int = DEFAULT_FRONTIER_CAP,
        candidate_cap: int = DEFAULT_CANDIDATE_CAP,
        cache_dir: str | os.PathLike | None = None,
        witness_cap: int = _WITNESS_CAP,
    ):
        if not isinstance(k, int) or k < 3:
            raise PreconditionError(f"caterpillar size must be an integer >= 3, got {k!r}")
        if not isinstance(d, int) or d < 2:
            raise PreconditionError(f"arity bound must be an integer >= 2, got {d!r}")
        self.k = k
        self.d = d
        self.frontier_cap = frontier_cap
        self.candidate_cap = candidate_cap
        self.witness_cap = witness_cap
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self.frontiers = ParetoFrontiers(k, d)

    # -- cache helpers -----------------------------------------------------

    def _cache_file(self, n: int) -> Path:
        assert self.cache_dir is not None
        return self.cache_dir / f"frontier_d{self.d}_k{self.k}_n{n}.jsonl"

    def _load_level(self, n: int) -> _Level | None:
        if self.cache_dir is None:
            return None
        path = self._cache_file(n)
        if not path.exists():
            return None
        vectors: list[tuple[int, ...]] = []
        witnesses: list[str | None] = []
        try:
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    obj = json.loads(line)
                    vec = tuple(int(x) for x in obj["vector"])
                    if obj["n"] != n or len(vec) != self.k - 2:
                        raise CacheError(
                            f"cache file {path} does not match (k={self.k}, n={n})"
                        )
                    vectors.append(vec)
                    witnesses.append(obj.get("witness"))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
            raise CacheError(f"corrupt frontier cache file {path}: {err}") from err
        if not vectors:
            raise CacheError(f"frontier cache file {path} holds no entries")
        return _Level(vectors, witnesses=witnesses)

    def _store_level(self, n: int) -> None:
        if self.cache_dir is None:
            return
        level = self.frontiers._levels[n]
        argmin = self.frontiers.argmin_index(n)
        include_all = len(level.vectors) <= self.witness_cap
        lines = []
        for i, vec in enumerate(level.vectors):
            witness = (
                self.frontiers.witness_code(n, i) if include_all or i == argmin else None
            )
            lines.append(
                json.dumps(
                    {"n": n, "vector": list(vec), "witness": witness},
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self._cache_file(n)
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in lines))
        os.replace(tmp, path)

    # -- the DP proper ------------------------------------------------------

    def _candidates(self, n: int):
        levels = self.frontiers._levels
        vectors: list[tuple[int, ...]] = []
        parents: list[tuple[tuple[int, int], ...]] = []
        for m in range(2, min(self.d, n) + 1):
            for sizes in _partitions_into_parts(n, m):
                # Group equal branch sizes so unordered branch multisets are
                # enumerated once each (the combiner is symmetric).
                groups: list[tuple[int, int]] = []
                for s in sizes:
                    if groups and groups[-1][0] == s:
                        groups[-1] = (s, groups[-1][1] + 1)
                    else:
                        groups.append((s, 1))
                index_pools = [
                    combinations_with_replacement(range(len(levels[s].vectors)), cnt)
                    for s, cnt in groups
                ]
                for pick in product(*index_pools):
                    parts = []
                    parent = []
                    for (s, _), idxs in zip(groups, pick):
                        for idx in idxs:
                            vec = levels[s].vectors[idx]
                            parts.append((s, (comb(s, 2),) + vec))
                            parent.append((s, idx))
                    combined = combine_caterpillar_counts(parts, self.k)
                    vectors.append(combined[1:])
                    parents.append(tuple(parent))
                    if len(vectors) > self.candidate_cap:
                        raise BudgetError(
                            f"level n={n} produced more than {self.candidate_cap} "
                            f"candidate vectors; raise candidate_cap to continue"
                        )
        return vectors, parents

    def _build_level(self, n: int) -> None:
        levels = self.frontiers._levels
        if n in levels:
            return
        loaded = self._load_level(n)
        if loaded is not None:
            levels[n] = loaded
            return
        if n == 1:
            levels[n] = _Level([(0,) * (self.k - 2)], witnesses=["*"])
        else:
            vectors, parents = self._candidates(n)
            keep = pareto_minimal(vectors)
            if len(keep) > self.frontier_cap:
                raise BudgetError(
                    f"frontier at n={n} holds {len(keep)} entries, above the cap "
                    f"of {self.frontier_cap}; raise frontier_cap to continue"
                )
            levels[n] = _Level([vectors[i] for i in keep], parents=[parents[i] for i in keep])
        self._store_level(n)

    def run(self, n_max: int) -> ParetoFrontiers:
        if not isinstance(n_max, int) or n_max < 1:
            raise PreconditionError(f"n_max must be an integer >= 1, got {n_max!r}")
        for n in range(1, n_max + 1):
            self._build_level(n)
        return self.frontiers


def pareto_min_counts(
    n_max: int,
    k: int,
    d: int = 2,
    *,
    allow_general_d: bool = False,
    frontier_cap: int = DEFAULT_FRONTIER_CAP,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
    cache_dir: str | os.PathLike | None = None,
) -> ParetoFrontiers:
    """Frontiers (and thus exact minimum c_k) for every leaf count up to n_max.

    The binary case is the supported default. Hosts with d > 2 use the same
    DP over branch-size compositions but have seen far less use; opt in with
    ``allow_general_d=True``.
    """
    if d > 2 and not allow_general_d:
        raise PreconditionError(
            f"the frontier DP defaults to binary hosts; pass allow_general_d=True "
            f"to run with d={d}"
        )
    dp = ParetoDP(
        k,
        d,
        frontier_cap=frontier_cap,
        candidate_cap=candidate_cap,
        cache_dir=cache_dir,
    )
    return dp.run(n_max)
