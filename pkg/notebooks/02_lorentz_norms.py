# %% [markdown]
# # Lorentz norms
#
# d(w,q) takes the nonincreasing rearrangement a* and returns
# (sum a*_n^q w_n)^(1/q).  Weights are piecewise: power law, constant, or
# geometric, so long prefixes never get materialized.

# %%
import math

from schreierlab.seqspace import (
    Constant,
    Geometric,
    PowerLaw,
    Segment,
    WeightSpec,
    em_power_sum,
    lorentz_norm,
    lorentz_norm_permutation_sup,
    lp_norm,
    pair_norm,
    power_sum,
    summing_lorentz_norm,
)

w = WeightSpec.power_law(0.5, 1000)
a = {4: 0.5, 9: 2.0, 11: -1.0}
print(lorentz_norm(a, w), lorentz_norm_permutation_sup(a, w))

# %% [markdown]
# With w_n = n^(-1/2) and q = 1 the Lorentz norm sits above the l_2 norm.

# %%
for vec in ([1, 1], [3, 1, 1, 1], [1] * 50):
    print(len(vec), lorentz_norm(vec, w), lp_norm(vec, 2))

# %% [markdown]
# Mixed segments: the validator catches a weight that rises across a
# boundary.

# %%
good = WeightSpec([Segment(1, 3, PowerLaw(0.5)), Segment(4, 9, Geometric(0.5)), Segment(10, 20, Constant(5e-4))])
bad = WeightSpec([Segment(1, 3, PowerLaw(0.5)), Segment(4, 9, Constant(0.9))])
print(good.validate(), bad.validate())
print(pair_norm([1, 1, 1], good, w))

# %% [markdown]
# Long power-law sums go through Euler-Maclaurin with a certified remainder.
# Up to 1e6 terms we can compare with compensated direct summation.

# %%
direct = power_sum(0.5, 1, 10**6, method="direct")
em = power_sum(0.5, 1, 10**6, method="em")
print(direct, em, abs(em - direct) / direct)

value, bound = em_power_sum(0.5, 1, 2**200, prec=256)
print("sum_{j <= 2^200} j^-1/2 ~", value, "remainder bound", bound)
print(summing_lorentz_norm(10**6, WeightSpec.power_law(0.5, 10**7)), 2 * math.sqrt(10**6))
