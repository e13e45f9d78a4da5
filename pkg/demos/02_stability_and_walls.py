"""A stability function, its mirror, and the walls between them."""
from fermat_mirror import build_beilinson, is_stable, make_Zn, mirror, simple_at, \
    thin_rep_from_point, walls_on_segment

Z = make_Zn(3)
M = mirror(Z)
print("phases of Z      :", [round(p, 4) for p in Z.phases()])
print("phases of mirror :", [round(p, 4) for p in M.phases()])

B = build_beilinson(3)
E = thin_rep_from_point(B, [1, -1, 0])
print("point rep under Z     :", is_stable(E, Z).status.value)
v = is_stable(E, M)
print("point rep under mirror:", v.status.value, "destabilized by", v.witness)
for i in range(3):
    print(f"S_{i} under mirror: {is_stable(simple_at(B, i), M).status.value}")

# moving along the straight segment from Z to its mirror the verdict flips at t = 1/2
for w in walls_on_segment(Z, M, E):
    print(f"wall at t = {w.exact_t} (float {w.t}) for the subobject {w.witness}")
