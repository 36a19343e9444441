"""Pure-numpy ranking kernel (fallback for the compiled extension).

Input per election (row): sorted candidate positions and the voter-CDF mass
of each candidate's Voronoi cell (coincident candidates have midpoint cuts at
the shared position, so the first slot of a run carries the group's left vote
share, the last slot its right share, interior slots zero).

Output: positions of the top-h candidates by vote share. Shares are compared
on a 1e-12 grid (quantized to integers), absorbing midpoint rounding; share
ties are broken uniformly at random via the pre-drawn tie keys. This makes
the result a deterministic function of the inputs, so the compiled and
fallback kernels agree bit-for-bit.
"""

import numpy as np

_SHARE_SCALE = 1e12


def _shares_with_ties(pos, mass, left_right, roles, out):
    """Resolve coincident-position vote shares for one election row."""
    k = pos.shape[0]
    rp = 0
    a = 0
    while a < k:
        b = a
        while b + 1 < k and pos[b + 1] == pos[a]:
            b += 1
        if b == a:
            out[a] = mass[a]
        else:
            c = b - a + 1
            left, right = mass[a], mass[b]
            out[a : b + 1] = 0.0
            if left_right:
                li = min(int(roles[rp] * c), c - 1)
                rj = min(int(roles[rp + 1] * (c - 1)), c - 2)
                rp += 2
                ri = rj + 1 if rj >= li else rj
                out[a + li] += left
                out[a + ri] += right
            else:
                out[a : b + 1] = (left + right) / c
        a = b + 1


def rank_elections(pos_sorted, masses, left_right, u_roles, u_keys, h):
    """Top-h positions by vote share for each election row.

    pos_sorted, masses, u_roles, u_keys: float64 arrays of shape (n, k).
    Returns float64 array of shape (n, h).
    """
    n, k = pos_sorted.shape
    shares = masses.copy()
    dup_rows = np.nonzero((pos_sorted[:, 1:] == pos_sorted[:, :-1]).any(axis=1))[0]
    for r in dup_rows:
        _shares_with_ties(pos_sorted[r], masses[r], left_right, u_roles[r], shares[r])
    q = np.rint(shares * _SHARE_SCALE).astype(np.int64)
    order = np.lexsort((u_keys, q), axis=-1)  # ascending, stable
    top = order[:, ::-1][:, :h]
    return np.take_along_axis(pos_sorted, top, axis=1)
