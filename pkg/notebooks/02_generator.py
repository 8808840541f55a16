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
# # The generator
#
# On polynomials the generator has an exact form through the martingale
# basis and an integral form against nu_{x,t}. For smooth functions the
# integral form needs care near y = x, where the integrand is a second
# divided difference.

# %%
import numpy as np

from qmeixner import (
    Poly,
    ProcessParams,
    cauchy,
    generator_fd,
    generator_poly,
    generator_poly_basis,
    generator_smooth,
)

params = ProcessParams(q=0.5, theta=0.3, tau=0.2)
x, t = 0.4, 1.0

# %% [markdown]
# y^2 is mapped to 1 and y^3 to (theta + q x) + 2x.

# %%
y2, y3 = Poly([0, 0, 1]), Poly.monomial(3)
print(generator_poly(y2, params, x, t), generator_poly_basis(y2, params, x, t))
print(generator_poly(y3, params, x, t), params.theta + params.q * x + 2 * x)

# %% [markdown]
# ## Difference quotients
#
# (P_{t,t+h} f - f) / h approaches the generator linearly in h.

# %%
p = Poly([0.1, 0.0, -0.4, 0.3, 0.2])
ref = generator_poly(p, params, x, t)
for h in (1e-1, 1e-2, 1e-3, 1e-4):
    left = generator_fd(p, params, x, t, h, 32, "left")
    right = generator_fd(p, params, x, t, h, 32, "right")
    print(f"h={h:.0e}  left err {abs(left - ref):.2e}  right err {abs(right - ref):.2e}")

# %% [markdown]
# ## A smooth non-polynomial function
#
# For f = 1 / (1 + y^2), sup |f''| = 2, so the generator is at most 1 in
# absolute value.

# %%
f = cauchy()
for xx in (-2.0, 0.0, 0.5, 3.0):
    smooth = generator_smooth(f, params, xx, t)
    fd = generator_fd(f.f, params, xx, t, 1e-5 * t, 64)
    print(f"x={xx:5.2f}  singular integral {smooth: .8f}  difference quotient {fd: .8f}")
