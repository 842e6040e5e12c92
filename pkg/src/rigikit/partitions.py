"""Bitmask helpers for exhaustive subset/partition minimization.

Used only by the brute-force oracles; everything here is exponential by
design and guarded by the callers' size limits.
"""

from __future__ import annotations


def submasks(mask: int):
    """All submasks of mask, descending, excluding 0 (unless mask == 0)."""
    s = mask
    while s:
        yield s
        s = (s - 1) & mask


def min_partition(n: int, cost):
    """Minimize sum of cost(part) over partitions of {0..n-1} into nonempty parts.

    cost maps a nonzero bitmask to an int.  Returns (value, parts) where
    parts is one minimizing partition as a list of bitmasks.  The empty
    ground set has value 0 and no parts.
    """
    full = (1 << n) - 1
    best = [0] * (full + 1)
    choice = [0] * (full + 1)
    for m in range(1, full + 1):
        low = m & (-m)
        rest = m ^ low
        b = None
        pick = 0
        # every partition has a unique part containing the lowest element
        t = rest
        while True:
            part = t | low
            v = cost(part) + best[m ^ part]
            if b is None or v < b:
                b, pick = v, part
            if t == 0:
                break
            t = (t - 1) & rest
        best[m] = b
        choice[m] = pick
    parts = []
    m = full
    while m:
        parts.append(choice[m])
        m ^= choice[m]
    return best[full] if n else 0, parts


def min_partition_table(n: int, cost):
    """Like min_partition but returns the full DP table best[mask]."""
    full = (1 << n) - 1
    best = [0] * (full + 1)
    for m in range(1, full + 1):
        low = m & (-m)
        rest = m ^ low
        b = None
        t = rest
        while True:
            part = t | low
            v = cost(part) + best[m ^ part]
            if b is None or v < b:
                b = v
            if t == 0:
                break
            t = (t - 1) & rest
        best[m] = b
    return best
