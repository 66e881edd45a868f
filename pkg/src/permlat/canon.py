"""Canonical forms for small relational structures.

Works on any structure presented as a cell function ``cell(i, j)`` returning a
hashable pair-label (the diagonal carries vertex labels). Canonicalization is
iterative color refinement followed by backtracking over color-respecting
permutations; structures here never exceed 16 elements, so the worst case
(a fully symmetric antichain) stays cheap.
"""

from __future__ import annotations

from typing import Callable, Hashable

Cell = Callable[[int, int], Hashable]


def _ranked(signatures: list) -> list[int]:
    order = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
    return [order[sig] for sig in signatures]


def refine_colors(n: int, cell: Cell) -> list[int]:
    """Stable vertex coloring, invariant under isomorphism."""
    sigs = [
        (cell(i, i), tuple(sorted((cell(i, j), cell(j, i)) for j in range(n) if j != i)))
        for i in range(n)
    ]
    colors = _ranked(sigs)
    while True:
        sigs = [
            (colors[i], tuple(sorted((colors[j], cell(i, j), cell(j, i)) for j in range(n) if j != i)))
            for i in range(n)
        ]
        new = _ranked(sigs)
        if new == colors:
            return colors
        colors = new


def canonical_key(n: int, cell: Cell) -> tuple:
    """Canonical form: two structures get equal keys iff they are isomorphic.

    The key is the lexicographically minimal staircase encoding of the cell
    matrix over all permutations that list refined color classes in ascending
    order.
    """
    if n == 0:
        return ()
    colors = refine_colors(n, cell)
    target = sorted(colors)
    best: list[tuple] | None = None
    used = [False] * n
    perm: list[int] = []

    def dfs(k: int, acc: list[tuple]) -> None:
        nonlocal best
        if k == n:
            if best is None or acc < best:
                best = list(acc)
            return
        cands = []
        for i in range(n):
            if used[i] or colors[i] != target[k]:
                continue
            prof = [cell(i, i)]
            for q in perm:
                prof.append(cell(q, i))
                prof.append(cell(i, q))
            cands.append((tuple(prof), i))
        cands.sort()
        for prof, i in cands:
            acc.append(prof)
            if best is not None and acc > best[: len(acc)]:
                acc.pop()
                continue
            used[i] = True
            perm.append(i)
            dfs(k + 1, acc)
            perm.pop()
            used[i] = False
            acc.pop()

    dfs(0, [])
    assert best is not None
    return tuple(best)


def matrix_key(matrix: list[list]) -> tuple:
    """Canonical key of a square matrix of hashable labels."""
    return canonical_key(len(matrix), lambda i, j: matrix[i][j])
