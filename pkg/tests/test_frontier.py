"""Pareto-frontier DP: pruning soundness, caching, and budget refusals."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from treedensity import (
    BudgetError,
    CacheError,
    ParetoDP,
    PreconditionError,
    caterpillar_counts,
    enumerate_trees,
    pareto_min_counts,
    parse_tree,
)
from treedensity.frontier import _partitions_into_parts, pareto_minimal


# ---------------------------------------------------------------------------
# the pruning primitive


def test_pareto_minimal_basic():
    assert pareto_minimal([(1, 2), (2, 1), (2, 2)]) == [0, 1]
    assert pareto_minimal([(3, 3), (1, 1)]) == [1]
    # duplicates keep the first occurrence only
    assert pareto_minimal([(2, 2), (2, 2), (1, 3)]) == [2, 0]
    assert pareto_minimal([]) == []
    assert pareto_minimal([(5,)]) == [0]


def _dominates(u, v):
    return all(a <= b for a, b in zip(u, v))


@settings(max_examples=150, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=6),
            st.integers(min_value=0, max_value=6),
            st.integers(min_value=0, max_value=6),
        ),
        max_size=25,
    )
)
def test_pareto_minimal_against_direct_filter(vectors):
    kept = pareto_minimal(vectors)
    kept_set = [vectors[i] for i in kept]
    # every kept vector is undominated by the other kept vectors
    for i, u in enumerate(kept_set):
        assert not any(_dominates(w, u) for j, w in enumerate(kept_set) if j != i)
    # every dropped vector is dominated by some kept vector
    for i, v in enumerate(vectors):
        if i not in kept:
            assert any(_dominates(u, v) for u in kept_set)
    # the set of minimal values is exactly reproduced by a direct filter
    minimal = {
        v for v in vectors if not any(_dominates(u, v) and u != v for u in vectors)
    }
    assert set(kept_set) == minimal
    assert len(set(kept_set)) == len(kept_set)


def test_partitions_into_parts():
    assert list(_partitions_into_parts(5, 2)) == [(1, 4), (2, 3)]
    assert list(_partitions_into_parts(6, 3)) == [(1, 1, 4), (1, 2, 3), (2, 2, 2)]
    assert list(_partitions_into_parts(2, 3)) == []


# ---------------------------------------------------------------------------
# DP vs exhaustive enumeration


def _exhaustive_min(n, d, k):
    return min(caterpillar_counts(t, k)[k] for t in enumerate_trees(n, d))


@pytest.mark.parametrize("k", [4, 5])
def test_dp_matches_exhaustive_binary(k):
    fronts = pareto_min_counts(12, k)
    for n in range(k, 13):
        assert fronts.min_count(n) == _exhaustive_min(n, 2, k), n


def test_dp_matches_exhaustive_ternary():
    fronts = pareto_min_counts(10, 4, 3, allow_general_d=True)
    for n in range(4, 11):
        assert fronts.min_count(n) == _exhaustive_min(n, 3, 4), n


def test_dp_frontier_vectors_are_real_trees():
    # every frontier vector must be attained by an actual binary tree
    fronts = pareto_min_counts(10, 5)
    for n in range(1, 11):
        attained = {
            caterpillar_counts(t, 5).counts[1:] for t in enumerate_trees(n, 2)
        }
        for vec in fronts.vectors(n):
            assert vec in attained, (n, vec)
        assert fronts.frontier_size(n) == len(fronts.vectors(n))


def test_dp_witnesses_recount():
    fronts = pareto_min_counts(16, 4)
    assert fronts.max_n() == 16
    for n in range(4, 17):
        entry = fronts.argmin_entry(n)
        assert entry.witness is not None
        t = parse_tree(entry.witness)
        assert t.leaf_count == n
        assert caterpillar_counts(t, 4)[4] == entry.vector[-1] == fronts.min_count(n)


def test_general_d_needs_opt_in():
    with pytest.raises(PreconditionError) as exc:
        pareto_min_counts(8, 4, 3)
    assert "allow_general_d" in str(exc.value)


def test_dp_argument_errors():
    for k, d in [(2, 2), (4, 1)]:
        with pytest.raises(PreconditionError):
            ParetoDP(k, d)
    with pytest.raises(PreconditionError):
        ParetoDP(4, 2).run(0)


def test_dp_budget_refusals():
    with pytest.raises(BudgetError) as exc:
        ParetoDP(5, 2, candidate_cap=3).run(8)
    assert "candidate" in str(exc.value)
    with pytest.raises(BudgetError) as exc:
        ParetoDP(5, 2, frontier_cap=0).run(4)
    assert "frontier" in str(exc.value)


# ---------------------------------------------------------------------------
# persistence


def test_cache_roundtrip_and_resume(tmp_path):
    first = ParetoDP(4, 2, cache_dir=tmp_path).run(10)
    files = sorted(p.name for p in tmp_path.glob("frontier_*.jsonl"))
    assert files == [f"frontier_d2_k4_n{n}.jsonl" for n in sorted(range(1, 11), key=str)]

    # a fresh DP over the same directory reloads rather than recomputes,
    # and extends the sweep past the cached range
    second = ParetoDP(4, 2, cache_dir=tmp_path).run(12)
    for n in range(1, 11):
        assert second.vectors(n) == first.vectors(n)
        assert second.argmin_entry(n) == first.argmin_entry(n)
    assert second.min_count(12) == _exhaustive_min(12, 2, 4)

    # cached witnesses survive the round trip
    entry = second.argmin_entry(8)
    assert caterpillar_counts(parse_tree(entry.witness), 4)[4] == entry.vector[-1]


def test_cache_files_are_byte_deterministic(tmp_path):
    a_dir = tmp_path / "a"
    b_dir = tmp_path / "b"
    ParetoDP(4, 2, cache_dir=a_dir).run(9)
    ParetoDP(4, 2, cache_dir=b_dir).run(9)
    for n in range(1, 10):
        name = f"frontier_d2_k4_n{n}.jsonl"
        assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()


def test_cache_content_shape(tmp_path):
    ParetoDP(4, 2, cache_dir=tmp_path).run(6)
    lines = (tmp_path / "frontier_d2_k4_n6.jsonl").read_text().splitlines()
    for line in lines:
        obj = json.loads(line)
        assert obj["n"] == 6 and len(obj["vector"]) == 2


def test_cache_corruption_is_reported(tmp_path):
    ParetoDP(4, 2, cache_dir=tmp_path).run(5)
    target = tmp_path / "frontier_d2_k4_n5.jsonl"

    target.write_text("not json\n")
    with pytest.raises(CacheError):
        ParetoDP(4, 2, cache_dir=tmp_path).run(5)

    # wrong leaf count inside the file
    target.write_text('{"n": 4, "vector": [0, 0], "witness": null}\n')
    with pytest.raises(CacheError):
        ParetoDP(4, 2, cache_dir=tmp_path).run(5)

    # wrong vector width (written by a different k)
    target.write_text('{"n": 5, "vector": [0, 0, 0], "witness": null}\n')
    with pytest.raises(CacheError):
        ParetoDP(4, 2, cache_dir=tmp_path).run(5)

    target.write_text("")
    with pytest.raises(CacheError):
        ParetoDP(4, 2, cache_dir=tmp_path).run(5)


def test_frontier_sizes_stay_small_for_binary():
    # the even-split tree dominates every coordinate at once in the observed
    # range, so frontiers collapse to single entries
    fronts = pareto_min_counts(40, 4)
    assert all(fronts.frontier_size(n) == 1 for n in range(1, 41))


def test_larger_sweep_spot_value():
    fronts = pareto_min_counts(40, 5)
    assert fronts.min_count(40) == 108560
