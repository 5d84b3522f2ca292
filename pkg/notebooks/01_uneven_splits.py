# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Uneven splits of several measures
#
# Given `n` probability measures on R^n and targets `alpha_i`, we look for one
# oriented hyperplane whose positive side carries mass `alpha_i` of every
# measure.  With `alpha_i = 1/2` this is the ham sandwich problem and always
# has a solution; for other targets it can fail, unless the supports are
# separated.

# %%
import numpy as np

from hamsplit.measures import SmoothCap, UniformBall
from hamsplit.solver import Problem, find_split, scan_residual, verify_split

# %% [markdown]
# Two separated discs, asking for 30% of the left one and 70% of the right one.

# %%
problem = Problem((UniformBall((-3, 0), 1), UniformBall((3, 0), 1)), (0.3, 0.7))
res = find_split(problem)
print(res.hyperplane, res.achieved, res.residual_norm, res.method)
print("verified:", verify_split(problem, res.hyperplane, 1e-6).passed)

# %% [markdown]
# A smooth bump and a disc that overlap; the smooth measure is evaluated by
# quadrature, so the default tolerance is 1e-3, although the solver usually
# lands much closer.

# %%
problem = Problem((SmoothCap((0, 0), 1.5), UniformBall((1, 0.5), 1)), (0.2, 0.6))
res = find_split(problem)
print(res.found, res.residual_norm)

# %% [markdown]
# ## When no split exists
#
# Two concentric discs with radii 2 and 1 and targets (1/4, 1/4).  For any
# normal the two quarter-lines sit at offsets `2 d*` and `d*`, where `d*` is
# the offset cutting a quarter of the unit disc, so the scan of offset
# differences is flat at `d*` and never reaches 0.

# %%
concentric = Problem((UniformBall((0, 0), 2), UniformBall((0, 0), 1)), (0.25, 0.25))
scan = scan_residual(concentric, 1024)
print("scan minimum", scan.best_norm, "maximum", scan.norms.max())
out = find_split(concentric)
print(type(out).__name__)

# %% [markdown]
# Three collinear balls in R^3 with a large middle ball: a plane cutting 10%
# off each outer ball cannot also cut only 10% off the middle one.

# %%
from hamsplit.scenarios import build

collinear = build("collinear_balls").problem
print(scan_residual(collinear, 2048).best_norm)
