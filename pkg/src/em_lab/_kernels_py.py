"""Pure-Python kernels; the compiled module ``_kernels`` mirrors this API."""

from __future__ import annotations

from typing import Sequence


def fundamental_counts(colors: Sequence[int], strict: Sequence[int],
                       table: Sequence[Sequence[int]]) -> list[int]:
    """Count weakly decreasing index sequences by total q-exponent.

    ``table[c][i-1]`` is the exponent substituted for ``x_i^(c)`` (-1 marks a
    zero entry).  ``strict[t]`` forces ``i_(t+1) > i_(t+2)``.  The result
    ``out[e]`` is the number of admissible sequences of weight ``q^e``.
    """
    n = len(colors)
    if n == 0:
        return [1]
    width = len(table[0]) if table else 0
    rows = [table[c] for c in colors]
    counts: dict[int, int] = {}

    def rec(t: int, bound: int, exp: int) -> None:
        row = rows[t]
        last = t == n - 1
        drop = 0 if last else strict[t]
        for i in range(bound, 0, -1):
            e = row[i - 1]
            if e < 0:
                continue
            if last:
                counts[exp + e] = counts.get(exp + e, 0) + 1
            else:
                nb = i - drop
                if nb >= 1:
                    rec(t + 1, nb, exp + e)

    rec(0, width, 0)
    if not counts:
        return []
    out = [0] * (max(counts) + 1)
    for e, c in counts.items():
        out[e] = c
    return out
