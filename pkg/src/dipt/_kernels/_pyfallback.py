"""Pure-numpy fallback for the matching kernels.

Same signatures and dtypes as the compiled module; selected automatically
when the extension is not built.
"""

import numpy as np


def match_one(lo, hi, mask, x):
    inside = (lo <= x) & (x <= hi)
    return np.ascontiguousarray(np.where(mask.astype(bool), inside, True).all(axis=1))


def match_block(lo, hi, mask, X):
    free = ~mask.astype(bool)
    inside = (lo[None, :, :] <= X[:, None, :]) & (X[:, None, :] <= hi[None, :, :])
    return np.ascontiguousarray((inside | free[None, :, :]).all(axis=2))
