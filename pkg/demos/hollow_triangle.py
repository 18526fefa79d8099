"""Walk through the divisor computation for a triangle of three surfaces.

Three components meet pairwise in curves with no triple point, so the dual
complex is a hollow triangle with ``H^1 = Z``. Run with
``python3 demos/hollow_triangle.py`` from the repository root.
"""

from pathlib import Path

from chowcalc.calculator import chc1_divisor, pic_row
from chowcalc.cli import load_config
from chowcalc.complexes import cohomology
from chowcalc.dualcomplex import export_dot, gamma_cohomology

cfg = load_config(Path(__file__).resolve().parent.parent / "fixtures" / "hollow_triangle.json")
gamma = cfg.gamma
print("H^0, H^1 of the dual complex:", gamma_cohomology(gamma, 0), gamma_cohomology(gamma, 1))
print(export_dot(gamma))

row = pic_row(cfg.data)
for t in row.degrees():
    print(f"H^{t} of the Picard row:", cohomology(row, t))

result = chc1_divisor(cfg.data)
for m in result.degrees():
    print(f"CHC^1(E, {m}) = {result[m]}    [{result.rules[m]}]")
