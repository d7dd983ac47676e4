"""Pade approximants of classical series: existence, construction, accuracy.

Walks through the basic machinery on the exponential, logarithm and
geometric series: the Hankel existence test, the normalized approximant,
the order-condition residual, and how far beyond the partial sums a
rational approximant reaches.
"""

import math

import numpy as np

from pade_universal import (
    FormalPowerSeries,
    hankel_determinant,
    order_condition_residual,
    pade_approximant,
    taylor_partial_sum,
)

exp_series = FormalPowerSeries([1 / math.factorial(k) for k in range(16)])
geometric = FormalPowerSeries([1.0] * 16)

print("=== existence: the Hankel determinant test ===")
for name, series, p, q in [
    ("exp, (1,1)", exp_series, 1, 1),
    ("exp, (3,3)", exp_series, 3, 3),
    ("geometric, (0,1)", geometric, 0, 1),
    ("geometric, (1,2)", geometric, 1, 2),
]:
    report = hankel_determinant(series, p, q)
    print(f"  {name:18s} |D| = {abs(report.value):.3e}  exists: {report.nonvanishing}")

print()
print("=== the classical [exp; 1/1] = (1 + z/2)/(1 - z/2) ===")
r = pade_approximant(exp_series, 1, 1)
print("  numerator  :", [f"{c.real:+.3f}" for c in r.numer.coeffs])
print("  denominator:", [f"{c.real:+.3f}" for c in r.denom.coeffs])
print(f"  order-condition residual: {order_condition_residual(exp_series, r):.2e}")

print()
print("=== rational vs polynomial accuracy for exp on [0, 2] ===")
x = np.linspace(0.0, 2.0, 21)
truth = np.exp(x)
r44 = pade_approximant(exp_series, 4, 4)
s8 = taylor_partial_sum(exp_series, 8)
print("  max |[exp;4/4](x) - e^x| :", f"{np.max(np.abs(r44.eval(x) - truth)):.3e}")
print("  max |S_8(x)      - e^x| :", f"{np.max(np.abs(s8.eval(x) - truth)):.3e}")
print("  (same data budget: 9 coefficients each)")

print()
print("=== a pole is reproduced exactly ===")
r01 = pade_approximant(geometric, 0, 1)
z = 0.8 + 0.3j
print(f"  [1/(1-z); 0/1] at z = {z}: {r01.eval(z):.6f}")
print(f"  exact value             : {1 / (1 - z):.6f}")
