# coding: utf-8

# # A small phase diagram
#
# Sweep the bad-state probability and the neighbourhood size around the
# canonical ring. At `r = 2` every bank already touches half the ring, so
# the system is stable without insurance. At `r = 1` the contagious regime
# ends once `p` passes `p_star`.

# In[1]:

from collections import Counter

from entangled_banks import canonical_scenario
from entangled_banks.cli import parse_sweep, sweep

spec = parse_sweep("p=0:0.001:0.012,r=1..2", canonical_scenario())
rows = list(sweep(spec))
for row in rows:
    print(f"r={row['r']} p={row['p']:.3f} {row['regime']:20s} {row['restriction_status']}")


# In[2]:

print(Counter((row["r"], row["regime"]) for row in rows))
