# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Rescaled kernels converge to nu
#
# The measure (y - x)^2 P_{s,t}(x, dy) / (t - s) tends to nu_{x,t} as
# s -> t from below and to nu_{x,s} as t -> s from above. Its moments are
# polynomial in h = t - s, so the error is first order.

# %%
import numpy as np

from qmeixner import ProcessParams
from qmeixner.markov import convergence_study

params = ProcessParams(q=0.5, theta=0.3, tau=0.2)
hs = [1e-1, 1e-2, 1e-3, 1e-4]

# %%
for side in ("left", "right"):
    res = convergence_study(params, 0.4, 1.0, hs, k_max=6, side=side)
    err = np.array(res["errors"])
    print(side)
    print("  order ", res["orders"])
    for h, row in zip(hs, err):
        print(f"  h={h:.0e}", np.array2string(row, precision=2))
    print("  slopes", np.round(res["slopes"], 3))

# %% [markdown]
# The first moment matches exactly for every h, so it has no fitted slope.
