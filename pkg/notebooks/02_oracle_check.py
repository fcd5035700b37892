# coding: utf-8

# # Closed form against brute force
#
# A bank that leaves its `2r` counter-party exposures unhedged survives when
# at most `r` of them go against it. The expected payoff has a closed form
# made of binomial sums over `(2r)!`. Here it is compared with a walk over
# all `4^r` sign patterns.

# In[1]:

import numpy as np

from entangled_banks import enumerate_unhedged_payoff, expected_unhedged_payoff, survival_mass
from entangled_banks.exact import hedging_bound_ratio

for r in range(1, 7):
    print(r, survival_mass(r), float(survival_mass(r)))


# In[2]:

rng = np.random.default_rng(0)
worst = 0.0
for r in range(1, 9):
    for B_1, u in rng.uniform(0, 1, size=(50, 2)):
        a = expected_unhedged_payoff(B_1, u, r)
        b = enumerate_unhedged_payoff(B_1, u, r)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
print("largest relative gap:", worst)


# Banks hedge whenever `u` sits below `B_1` times a ratio that depends only
# on `r`. With two neighbours the ratio is exactly one half.

# In[3]:

for r in range(1, 6):
    print(r, hedging_bound_ratio(r), float(hedging_bound_ratio(r)))
