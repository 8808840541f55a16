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
# # Simulating paths
#
# Each step draws the next state from the N-point Gauss rule of the
# transition kernel at the current state. Draws depend only on the seed,
# the step and the path index, so chunked or threaded runs agree bit for
# bit.

# %%
import numpy as np

from qmeixner import ProcessParams
from qmeixner.simulate import empirical_stats, simulate_paths

params = ProcessParams(q=0.5, theta=0.3, tau=0.2)
times = np.linspace(0.0, 1.0, 5)
n = 100_000

# %%
ps = simulate_paths(params, 0.4, times, n, N=32, seed=7)
st = empirical_stats(ps)
for t, m, v in zip(st["times"], st["mean"], st["variance"]):
    print(f"t={t:.2f}  mean {m:.4f}  variance {v:.4f}  (expected 0.4, {t:.2f})")

# %%
again = simulate_paths(params, 0.4, times, n, N=32, seed=7, chunk_size=12_345, workers=4)
print("bit-identical:", ps.values.tobytes() == again.values.tobytes())

# %% [markdown]
# Increments have mean zero and variance equal to the time step.

# %%
print(np.round(st["increment_mean"], 5))
print(np.round(st["increment_variance"], 4))
