"""Tensor-power quivers, their index function and commuting squares."""
from fermat_mirror import arrow_label, build_beilinson, build_tensor_power, index_of, to_dot

# the tensor square of A_1: four vertices, one commuting square
q2 = build_tensor_power(2)
print(q2, len(q2.vertices), "vertices", len(q2.arrows), "arrows", len(q2.relations), "relation")
print(to_dot(q2))

# counts grow like n^n
for n in range(2, 6):
    q = build_tensor_power(n)
    print(f"n={n}: {len(q.vertices):5d} vertices {len(q.arrows):6d} arrows {len(q.relations):6d} squares")

# the index is the coordinate sum; the label of an arrow is the coordinate it bumps
q3 = build_tensor_power(3)
print("index of 102:", index_of(q3, (1, 0, 2)))
print("label of 000 -> 010:", arrow_label(q3, (0, 0, 0), (0, 1, 0)))

# the Beilinson quiver carries n parallel arrows between consecutive vertices
B = build_beilinson(3)
print(B, len(B.arrows), "arrows")
for rel in B.relations:
    (a, b), (c, d) = rel.left, rel.right
    print(f"  E^{b.label} E^{a.label} = E^{d.label} E^{c.label} at vertex {a.target}")
