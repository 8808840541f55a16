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
# # Transition measures from recurrences
#
# The law of the process at time t, given state x at time s, is the
# orthogonality measure of a monic three-term recurrence. A Gauss rule
# with N nodes reproduces its moments up to degree 2N - 1.

# %%
import numpy as np

from qmeixner import ProcessParams, nu_measure, transition_measure
from qmeixner.spectra import moments, semicircle_moments

params = ProcessParams(q=0.5, theta=0.3, tau=0.2)
x, s, t = 0.4, 0.2, 1.0

# %%
m = transition_measure(params, x, s, t, 16)
print("nodes  ", np.round(m.nodes, 4))
print("weights", np.round(m.weights, 4))
print("mean", m.mean(), "variance", m.variance())

# %% [markdown]
# Mean x and variance t - s hold for every q, theta and tau.

# %%
for q in (-0.5, 0.0, 0.7):
    mq = transition_measure(ProcessParams(q, 0.3, 0.2), x, s, t, 32)
    print(f"q={q:5.2f}  mean-x={mq.mean() - x: .2e}  var-(t-s)={mq.variance() - (t - s): .2e}")

# %% [markdown]
# ## The q = 0 case
#
# At q = 0 the measure nu_{x,t} is a semicircle law with mean theta and
# variance t + tau, whatever x is.

# %%
p0 = ProcessParams(0.0, 0.5, 0.5)
got = moments(nu_measure(p0, 0.0, 0.5, 16), 6)
ref = semicircle_moments(0.5, 1.0, 6)
print(np.column_stack([got, ref]))

# %% [markdown]
# ## Growing N
#
# Low-order moments are already exact for small N; larger N resolves the
# shape of the support.

# %%
for n in (2, 4, 8, 32):
    mn = transition_measure(params, x, s, t, n)
    print(n, mn.nodes.min().round(4), mn.nodes.max().round(4), moments(mn, 3).round(6))
