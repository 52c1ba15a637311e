"""
Shift operators and the limits of finite sections
=================================================

The unilateral shift on l^2(N, H) has the closed unit ball as S-spectrum, yet
each N x N section is nilpotent with spectrum {0}. The closed-form models
answer membership questions for the infinite operators; the sections only
serve as gauge checks.
"""

from qkato.models import (
    MODEL_KINDS,
    bilateral_shift,
    diagonal,
    model_membership,
    truncation_report,
    unilateral_shift,
    weighted_shift,
)
from qkato.quaternion import Quaternion

probes = [Quaternion(0.0), Quaternion(0.0, 0.5), Quaternion(0.5), Quaternion(0.6, 0.0, 0.8),
          Quaternion(0.0, 0.0, 1.0), Quaternion(1.5)]
models = [unilateral_shift(), bilateral_shift(), weighted_shift("harmonic"),
          diagonal([Quaternion(0.0, 1.0), Quaternion(0.5)])]

for m in models:
    print(f"{m.name}: r_S = {m.r_s}, i = {m.lower_index}, invertible = {m.invertible}")
    for q in probes:
        row = {k: model_membership(m, q, k) for k in MODEL_KINDS}
        print(f"   q = {q}:", row)

# the 64 x 64 section of the unilateral shift: norm 1, kappa 0, r_S 0
rep = truncation_report(unilateral_shift(), 64, [Quaternion(0.0, 0.0, 1.0), Quaternion(0.5)])
print("section gauges:", rep["section_gauges"], " section r_S:", rep["section_r_s"])
for row in rep["probes"]:
    print(f"   q = {row['q']}: kappa {row['kappa_section']:.2e}, section on = {row['section_on_spectrum']}, "
          f"model on = {row['model_on_spectrum']}, expected disagreement = {row['expected_disagreement']}")
print(rep["disclaimer"])
