"""
Rate sweeps for plotting
========================

Sweeps emit CSV or JSON with one row per grid point and variant.
"""

import sys

from diqss import Variant
from diqss.sweep import Axis, SweepSpec, run_sweep, write_csv

variants = tuple(Variant.from_name(n) for n in ("basic", "ad+basic", "ad+ps"))
spec = SweepSpec(axes=(Axis("d", 0.0, 2.0, 11),), fidelity=1.0, q=0.05, variants=variants)
write_csv(run_sweep(spec), sys.stdout)

###############################################################################
# Two axes, fidelity against flip probability, noise pre-processing only.

spec = SweepSpec(
    axes=(Axis("F", 0.9, 1.0, 3), Axis("q", 0.0, 0.5, 3)),
    eta=0.98,
    variants=(Variant.from_name("np"), Variant.from_name("ad+np")),
)
for row in run_sweep(spec):
    print(row.axis_values, row.variant, round(row.rate, 4))
