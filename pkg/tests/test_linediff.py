from functools import lru_cache

from hypothesis import given, settings
from hypothesis import strategies as st

from pipegen.linediff import apply_diff, line_diff, split_lines

lines_strategy = st.lists(st.sampled_from(["a", "b", "c", "d", ""]), max_size=12)


def lcs_length_oracle(a: tuple, b: tuple) -> int:
    """Plain memoized recursion, independent of the DP implementation."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


def edit_size(ops) -> int:
    deleted = sum(op.old_range[1] - op.old_range[0] for op in ops)
    inserted = sum(len(op.lines) for op in ops)
    return deleted + inserted


def test_identical_inputs_give_empty_diff():
    assert line_diff(["a", "b"], ["a", "b"]) == []
    assert line_diff([], []) == []


def test_single_insert():
    ops = line_diff(["a", "c"], ["a", "b", "c"])
    assert len(ops) == 1
    assert ops[0].op == "insert"
    assert ops[0].old_range == (1, 1)
    assert ops[0].new_range == (1, 2)
    assert ops[0].lines == ("b",)


def test_single_delete():
    ops = line_diff(["a", "b", "c"], ["a", "c"])
    assert len(ops) == 1
    assert ops[0].op == "delete"
    assert ops[0].old_range == (1, 2)


def test_replace():
    ops = line_diff(["a", "b", "c"], ["a", "x", "c"])
    assert len(ops) == 1
    assert ops[0].op == "replace"
    assert ops[0].lines == ("x",)


def test_everything_changes():
    ops = line_diff(["a"], ["b", "c"])
    assert len(ops) == 1
    assert ops[0].op == "replace"


@settings(max_examples=300, deadline=None)
@given(lines_strategy, lines_strategy)
def test_apply_round_trip(old, new):
    assert apply_diff(line_diff(old, new), old) == new


@settings(max_examples=200, deadline=None)
@given(lines_strategy, lines_strategy)
def test_edit_script_is_minimal(old, new):
    # Minimal edit size for an LCS-based diff is n + m - 2 * LCS(n, m).
    expected = len(old) + len(new) - 2 * lcs_length_oracle(tuple(old), tuple(new))
    assert edit_size(line_diff(old, new)) == expected


@settings(max_examples=100, deadline=None)
@given(lines_strategy, lines_strategy)
def test_empty_iff_equal(old, new):
    ops = line_diff(old, new)
    assert (ops == []) == (old == new)


def test_split_lines():
    assert split_lines("") == []
    assert split_lines("a\n") == ["a"]
    assert split_lines("a\nb\n") == ["a", "b"]
    assert split_lines("a\n\nb\n") == ["a", "", "b"]
