# coding: utf-8

# # Thresholds for the canonical ring
#
# Eight banks sit on a ring and each one is exposed to its two immediate
# neighbours. We compute the debt levels and bad-state probability
# thresholds, then check where the chosen `p = 0.005` falls.

# In[1]:

from fractions import Fraction

from entangled_banks import canonical_scenario, compute_thresholds, validate_params

params = canonical_scenario()
print(params)


# Every restriction passes. The equity restriction holds with equality
# (`B_1 = R_H - 1 + X`), which is why restrictions are compared on the
# decimal values as typed and not on their binary approximations.

# In[2]:

report = validate_params(params)
for check in report.checks:
    print(check.describe())
print(1.1 - 1 + 0.2, "vs", 0.3)


# In[3]:

t = compute_thresholds(params)
for name in ("p_soc", "p_ind", "p_star", "p_r_aut", "p_s_aut", "p_term", "p_f_aut"):
    value = getattr(t, name)
    print(f"{name:8s} {value:.8f}  ~ {Fraction(value).limit_denominator(10_000)}")


# `p_soc < p < p_ind`: insurance would raise total welfare, yet no single
# bank wants to pay for it. This is the inefficient region.

# In[4]:

print(t.p_soc < params.p < t.p_ind)
print("debt:", {k: round(getattr(t, k), 6) for k in ("D_star", "D_safe", "D_term", "R_star")})
