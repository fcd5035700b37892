# coding: utf-8

# # Cascades and simulated periods
#
# One bank failing is enough to bring down the whole uninsured ring, one
# round of neighbours at a time. With insurance the failure stays put.

# In[1]:

import numpy as np

from entangled_banks import canonical_scenario, cascade, monte_carlo
from entangled_banks.contagion import expected_payoffs

params = canonical_scenario()
state = cascade([0], False, params)
print("failure round per bank:", state.failed_round)
print("insured:", sorted(cascade([0], True, params).failed_set()))


# With the intervention rule, neighbours that lost `r` counter-parties are
# propped up and the cascade stops at the first bank.

# In[2]:

helped = cascade([0], False, params, intervene=True)
print(sorted(helped.failed_set()), np.flatnonzero(helped.rescued))


# In[3]:

report = monte_carlo(params.replace(p=0.2), 100_000, seed=42)
print("bad-state frequency:", report.bad_state_frequency)
print("shocked banks:", report.shocked_histogram)
print("failures:", report.failure_distribution)
print("simulated payoff:", report.mean_bank_payoff)
print("expected payoff: ", expected_payoffs(params.replace(p=0.2)))
