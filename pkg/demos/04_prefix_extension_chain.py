"""Chained prefix extensions: universality for formal power series.

Starting from the single coefficient 0, each step appends coefficients so
the extended polynomial approximates a new target on a compact set away
from the origin, while the previously committed coefficients survive
verbatim.  The disagreement metric between consecutive outputs therefore
shrinks like 2^(-length): the chain converges in the sequence space while
hitting every scheduled target.
"""

from pade_universal import (
    Circle,
    CompactSpec,
    ExtensionRequirement,
    IndexSequence,
    TargetFunction,
    disagreement_metric,
    run_extension_schedule,
)

k_compact = CompactSpec([Circle(2.0, 0.5)], 64)
reciprocal = TargetFunction.rational([1.0], [0.0, 1.0])   # 1/z, fine off 0
index_pairs = IndexSequence([(k, k % 3) for k in range(61)])

schedule = [
    ExtensionRequirement(k_compact, reciprocal, 10),
    ExtensionRequirement(k_compact, TargetFunction.poly([1.0, 0.0, 0.5]), 50),
    ExtensionRequirement(k_compact, reciprocal, 100),
]

coeffs, certificates = run_extension_schedule([0.0], schedule, index_pairs)

print("step  target        1/s      achieved   (p,q)    new length")
targets = ["1/z", "1 + z^2/2", "1/z"]
for i, cert in enumerate(certificates):
    print(
        f"  {i}   {targets[i]:12s} {cert.requested:.0e}  "
        f"{max(cert.achieved.values()):.2e}  {str(cert.selected):8s} "
        f"{cert.selected[0] + 1}"
    )

print()
print(f"final coefficient stream: {len(coeffs)} coefficients, c_0 = {coeffs[0]}")
prefix0 = [0j] * len(coeffs)
print(
    "distance from the initial prefix in the disagreement metric:",
    f"{disagreement_metric(prefix0, list(coeffs)):.3f}",
)
print("each step preserved everything the previous steps committed.")
