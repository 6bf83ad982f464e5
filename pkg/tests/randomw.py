"""Deterministic generator of small weight matrices for property checks."""

import random

from wmdskit.fanbunch import is_F_matrix, is_W_matrix
from wmdskit.lattice import IntMatrix, gale_dual


def random_w_matrices(count, r=2, m_range=(3, 7), entry_max=3, seed=2024):
    """Reduced W-matrices whose Gale dual is a reduced F-matrix."""
    rng = random.Random(seed)
    out, seen = [], set()
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 200000:
            raise RuntimeError("generator exhausted")
        m = rng.randint(*m_range)
        if m <= r:
            continue
        cols = [tuple(rng.randint(0, entry_max) for _ in range(r)) for _ in range(m)]
        Q = IntMatrix.from_columns(cols, r)
        if Q in seen or not is_W_matrix(Q).ok:
            continue
        V = gale_dual(Q)
        f = is_F_matrix(V)
        if not (f.ok and f.reduced):
            continue
        seen.add(Q)
        out.append((V, Q))
    return out
