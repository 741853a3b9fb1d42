# %% [markdown]
# # Schreier families at desk scale
#
# Ordinals below w^w are written in Cantor normal form, and every family
# index is either such an ordinal or the sentinel w1 ("no restriction").

# %%
from itertools import combinations

from schreierlab import schreier as sc
from schreierlab.ordinal import fundamental, parse_ordinal

xi = parse_ordinal("w^2*3+w+4")
print(xi, xi.terms)
print("2 + w =", parse_ordinal("2+w"))  # left absorption

# %% [markdown]
# Limits use a fixed fundamental sequence whose terms are all successors.

# %%
for text in ("w", "w*2", "w^2"):
    lim = parse_ordinal(text)
    print(text, [str(fundamental(lim, n)) for n in range(1, 5)])

# %% [markdown]
# S_1 holds the sets with |F| <= min F.  S_w picks n <= min F and asks for
# membership in S_n, so {5,...,10} qualifies through S_5.

# %%
print(sc.is_member((3, 5, 9), 1), sc.is_member((2, 3, 4), 1))
print(sc.is_member((5, 6, 7, 8, 9, 10), "w"))
print("maximal sets of S_1 in {1..5}:", sc.enumerate_maximal(1, 5))

# %% [markdown]
# The greedy decomposition is checked against brute force on every subset of
# {1..10}.

# %%
sets = [F for r in range(11) for F in combinations(range(1, 11), r)]
for x in ("1", "2", "w", "w+1"):
    agree = all(sc.is_member(F, x) == sc.is_member_exhaustive(F, x) for F in sets)
    size = sum(sc.is_member(F, x) for F in sets)
    print(f"S_{x}: {size} members, greedy == exhaustive: {agree}")

# %% [markdown]
# Doubling {2n, 2n+2 : n in A} stays inside the family.

# %%
A = (3, 4, 5)
print(A, "->", sc.double(A), sc.is_member(A, 1), sc.is_member(sc.double(A), 1))

# %% [markdown]
# Composite families: S_1[S_1] lands inside S_2 with L the identity, and the
# threshold d(3, w) is 3 on {1..12}.

# %%
print("L =", sc.find_L(1, 1, 10))
print("d(1,2) =", sc.threshold(1, 2, 10), " d(3,w) =", sc.threshold(3, "w", 12))
