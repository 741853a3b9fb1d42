# %% [markdown]
# # The alternating weight pair
#
# Two weight sequences take turns following j^(-s), s = 1/q - 1/p.  While
# one follows the power law, the other is held constant and then decays
# geometrically, so every index is covered by at least one of them.

# %%
from schreierlab.pairgen import PrecisionBudgetError, build_pair, validate_pair

pair = build_pair(2, 1, 3)
for k, (m, n) in enumerate(pair.stages, start=1):
    print(f"stage {k}: m={m} n={n}")

# %% [markdown]
# The segments show the alternation.

# %%
for name, spec in (("w", pair.w), ("wt", pair.wt)):
    print(name)
    for seg in spec.segments:
        print(f"  [{seg.start}, {seg.end}] {seg.form.kind}")

# %% [markdown]
# Validation covers structure, coverage, the stage inequalities, minimality
# of every chosen index, and domination of l_p by the pair sum.

# %%
report = validate_pair(pair, sample_budget=2000)
for check in report.checks:
    print("PASS" if check.passed else "FAIL", check.name, check.detail)

# %% [markdown]
# A fourth stage is out of reach: wt has decayed like 2^(-n_3) with
# n_3 ~ 8e19, so m_4 would be a number with about 1.7e20 bits.

# %%
try:
    build_pair(2, 1, 4)
except PrecisionBudgetError as exc:
    print(exc)

# %%
other = build_pair(3, 1.5, 3)
print([(m.bit_length(), n.bit_length()) for m, n in other.stages])
