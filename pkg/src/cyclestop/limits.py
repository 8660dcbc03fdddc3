"""Size caps for the exact enumeration kernels.

Every cap guards a computation whose cost is exponential (or worse) in the
capped quantity, so exceeding one is an input error, not a performance knob.
The only runtime override is CYCLESTOP_MAX_EXACT, which can lower (never
raise) the subset-scan cap.
"""

import os

# 2^|E| subset scans (split tables, matroid d-vectors, definition-level sums).
BRUTE_FORCE_EDGE_CAP = 20

# Flat-lattice enumeration; the number of flats can be exponential in |E|.
LATTICE_ELEMENT_CAP = 16

# Counting recursions over labeled graphs on n vertices.
TABLE_N_CAP = 30

# Set-partition sums walk all partitions of the vertex set (Bell-number many).
PARTITION_VERTEX_CAP = 12

# Exhaustive insertion-order enumeration is limited to this many permutations.
EXHAUSTIVE_PERM_LIMIT = 10**7

ENV_MAX_EXACT = "CYCLESTOP_MAX_EXACT"


def brute_force_cap() -> int:
    """Current cap on ground-set size for exact subset scans.

    Reads CYCLESTOP_MAX_EXACT on every call so tests and callers can adjust
    it per invocation.  The value is clamped to [1, BRUTE_FORCE_EDGE_CAP];
    a non-integer value raises ValueError.
    """
    raw = os.environ.get(ENV_MAX_EXACT)
    if raw is None:
        return BRUTE_FORCE_EDGE_CAP
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(
            f"{ENV_MAX_EXACT} must be an integer, got {raw!r}") from None
    return max(1, min(value, BRUTE_FORCE_EDGE_CAP))
