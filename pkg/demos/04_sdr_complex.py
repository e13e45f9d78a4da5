"""The symbolic complex of a Beilinson representation and what breaks it."""
from fermat_mirror import build_beilinson, build_sdr, check_complex, thin_rep_from_point
from fermat_mirror.fields import QI
from fermat_mirror.sdr import single_violation_mutant

E = thin_rep_from_point(build_beilinson(3), [1, -1, 0])
c = build_sdr(E)
for i, d in enumerate(c.differentials):
    print(f"d_{i} =", d[0][0])
print("d o d = 0:", check_complex(c).ok)

# perturb one arrow: exactly one commuting relation fails and d o d picks it up
bad = single_violation_mutant(4, "first", 1, 3, 2, QI)
report = check_complex(build_sdr(bad, strict=False))
print("mutant:", report.to_json())
