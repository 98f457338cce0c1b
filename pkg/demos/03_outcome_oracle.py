"""
Outcome probabilities and the enumeration oracle
================================================

The state is a GHZ state mixed with white noise.  Measuring all three
qubits in the sigma_x basis gives eight click outcomes; each lost photon
becomes a no-click symbol.
"""

import numpy as np

from diqss.outcome_model import (
    apply_post_selection,
    click_outcome_probs,
    noisy_state,
    oracle_ad,
    oracle_qber,
    outcome_distribution,
    svetlichny_polynomial,
)
from diqss.rates import distilled_qber, raw_qber

rho = noisy_state(0.98)
print("trace", np.trace(rho).real, "min eigenvalue", np.linalg.eigvalsh(rho).min())
print("click probabilities", np.round(click_outcome_probs(0.98), 5))

###############################################################################
# Exhaustive sums over the 27 outcome cells reproduce the closed forms.

f, eta = 0.98, 0.9206
dist = outcome_distribution(f, eta)
ps = apply_post_selection(dist)
print("basic QBER", oracle_qber(dist), raw_qber(f, eta))
print("post-selected QBER", oracle_qber(ps), raw_qber(f, eta, True))

keep, err = oracle_ad(ps, n=2, discard_noclick=False)
print("post-selected AD", err, distilled_qber(f, eta, True, 2)[0], "retention", keep)

###############################################################################
# Longer blocks filter harder and keep fewer rounds.

for n in (2, 3, 4):
    print(n, oracle_ad(dist, n=n, discard_noclick=True))

###############################################################################
# Tripartite nonlocality: the Svetlichny value crosses 4 at F = 1/sqrt(2).

for f in (0.6, 1 / np.sqrt(2), 0.9, 1.0):
    print(f"F={f:.4f}  S_ABC={svetlichny_polynomial(f):.6f}")
