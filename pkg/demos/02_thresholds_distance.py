"""
Efficiency thresholds and maximum distance
==========================================

"""

import numpy as np

from diqss import ChannelParams, Variant, efficiency_threshold, max_distance

basic = Variant()
ad = Variant(advantage_distillation=True)

for f in (1.0, 0.99, 0.97, 0.95):
    print(f"F={f:.2f}  eta_th={efficiency_threshold(f, 0.0, basic):.4f}  "
          f"with AD={efficiency_threshold(f, 0.0, ad):.4f}")

###############################################################################
# At F=1 the distilled QBER is zero, so AD is secure as soon as S exceeds 2.
# With S = 2*sqrt(2)*eta**3 that gives eta = 2**(-1/6).

print(efficiency_threshold(1.0, 0.0, ad), 2 ** (-1 / 6))

###############################################################################
# Reach over fiber at 0.2 dB/km with the default detector and coupling
# efficiencies.  The user-to-user separation is twice the source distance.

res = max_distance(1.0, 0.05, ad)
print(f"d_max={res.km:.3f} km, user to user {res.user_to_user_km:.2f} km")

for alpha in np.linspace(0.15, 0.3, 4):
    km = max_distance(1.0, 0.05, ad, params=ChannelParams(alpha=alpha)).km
    print(f"alpha={alpha:.2f} dB/km  d_max={km:.3f} km")
