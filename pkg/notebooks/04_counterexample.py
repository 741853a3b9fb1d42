# %% [markdown]
# # Neither summand dominates l_p, the sum does
#
# Summing vectors s_{n_k} make each Lorentz space look small next to l_p
# (ratio at least k), while the l_q-sum of the two spaces always dominates
# l_p with constant 1.

# %%
from schreierlab.dominate import Lorentz, Lp, PairSum, counterexample_report, domination_constant
from schreierlab.pairgen import build_pair

pair = build_pair(2, 1, 3)
report = counterexample_report(2, 1, 3, samples=2000, pair=pair)
for k, n, ratio in report.witnesses_w + report.witnesses_wt:
    print(f"k={k} n_k={n} ratio={ratio:.10f}")
print(report.verdict)

# %% [markdown]
# Domination constants are searched over flat vectors and random-restart
# ascent.  Against l_2 the single Lorentz space wt reaches 3 at n_3, while
# l_2 over the pair sum stays at most 1 (a spike gives 1/2).

# %%
n3 = pair.stages[2][1]
single = domination_constant(Lorentz(pair.wt), Lp(2), N=n3, budget=0)
print(single.constant_estimate, single.method, single.witness_flat_size == n3)

both = domination_constant(PairSum(pair.w, pair.wt), Lp(2), N=200, budget=200, seed=1)
print(both.constant_estimate)

# %% [markdown]
# Schreier restrictions shrink the admissible supports.  On {1..20} w is
# already geometric after index 2, so longer supports push the ratio up.

# %%
for xi in (1, 2, "w", "w1"):
    rep = domination_constant(Lorentz(pair.w), Lp(2), xi=xi, N=20, budget=50)
    print(xi, round(rep.constant_estimate, 6), rep.witness_size)
