"""Stable point representations land on the Fermat hypersurface; the mirror kills them."""
from fermat_mirror import build_chart, mirror_report
from fermat_mirror.fields import C64, Q

# over the rationals the Fermat cubic has only the three points with a (1, -1) pair
chart = build_chart(3, Q, 12, seed=0)
for e in chart.entries:
    print(e.point, e.verdict)
print(chart.summary())

# the quartic has no small Gaussian points, so sample it numerically
chart = build_chart(4, C64, 8, seed=0)
print(chart.summary())

r = mirror_report(3)
unstable = sum(e["mirror"]["status"] == "unstable" for e in r.entries)
print(f"mirror side: {r.family_size} thin indecomposables, {unstable} unstable; simples stable")
