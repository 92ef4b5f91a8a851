"""Minimal line-level diffs via longest common subsequence.

Scripts are small (tens of lines), so a plain O(n*m) DP matrix is fine.
Adjacent delete+insert runs are merged into replace ops. Ranges are
half-open [start, end) line indexes; an insert has a zero-width old range
at the insertion point.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DiffOp:
    op: str  # "insert" | "delete" | "replace"
    old_range: tuple[int, int]
    new_range: tuple[int, int]
    lines: tuple[str, ...] = ()  # replacement/inserted lines (empty for delete)
    owner: str | None = None

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "old_range": list(self.old_range),
            "new_range": list(self.new_range),
            "lines": list(self.lines),
            "owner": self.owner,
        }


def _lcs_matrix(a: list[str], b: list[str]) -> list[list[int]]:
    lengths = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i, x in enumerate(a):
        row = lengths[i + 1]
        prev = lengths[i]
        for j, y in enumerate(b):
            if x == y:
                row[j + 1] = prev[j] + 1
            else:
                row[j + 1] = row[j] if row[j] >= prev[j + 1] else prev[j + 1]
    return lengths


def _matching_pairs(a: list[str], b: list[str]) -> list[tuple[int, int]]:
    """Index pairs (i, j) of one longest common subsequence, in order."""
    # Trim the common prefix and suffix first; only the middle needs the matrix.
    n, m = len(a), len(b)
    start = 0
    while start < n and start < m and a[start] == b[start]:
        start += 1
    end = 0
    while end < n - start and end < m - start and a[n - 1 - end] == b[m - 1 - end]:
        end += 1
    core_a = a[start:n - end]
    core_b = b[start:m - end]

    lengths = _lcs_matrix(core_a, core_b)
    pairs: list[tuple[int, int]] = []
    i, j = len(core_a), len(core_b)
    while i > 0 and j > 0:
        if core_a[i - 1] == core_b[j - 1]:
            pairs.append((start + i - 1, start + j - 1))
            i -= 1
            j -= 1
        elif lengths[i][j - 1] >= lengths[i - 1][j]:
            j -= 1
        else:
            i -= 1
    pairs.reverse()

    prefix = [(k, k) for k in range(start)]
    suffix = [(n - end + k, m - end + k) for k in range(end)]
    return prefix + pairs + suffix


def line_diff(old_lines: list[str], new_lines: list[str]) -> list[DiffOp]:
    """Edit script turning old_lines into new_lines; empty iff equal."""
    ops: list[DiffOp] = []
    ia = ib = 0
    anchors = _matching_pairs(old_lines, new_lines)
    anchors.append((len(old_lines), len(new_lines)))
    for sa, sb in anchors:
        if ia < sa and ib < sb:
            ops.append(DiffOp("replace", (ia, sa), (ib, sb), tuple(new_lines[ib:sb])))
        elif ia < sa:
            ops.append(DiffOp("delete", (ia, sa), (ib, ib)))
        elif ib < sb:
            ops.append(DiffOp("insert", (ia, ia), (ib, sb), tuple(new_lines[ib:sb])))
        ia, ib = sa + 1, sb + 1
    return ops


def apply_diff(ops: list[DiffOp], old_lines: list[str]) -> list[str]:
    """Reconstruct the new line list; inverse check for line_diff."""
    result: list[str] = []
    cursor = 0
    for op in ops:
        start, end = op.old_range
        result.extend(old_lines[cursor:start])
        result.extend(op.lines)
        cursor = end
    result.extend(old_lines[cursor:])
    return result


def split_lines(text: str) -> list[str]:
    """Text to line list; the trailing newline does not create a ghost line."""
    if text == "":
        return []
    return text.removesuffix("\n").split("\n")
