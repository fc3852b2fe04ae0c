"""Push a change of coordinates x -> x + x^2 through the chiral de Rham generators.

Run: python demos/coordinate_change.py
"""
from loopvert.jets import check_relations, format_jet_element, invert_jet, phi_sharp, vertex_generator_images
from loopvert.textio import Session, parse_expression

J = 4
phi = parse_expression("(x + x^2)", Session(jet=J), "jetmap").value
print("phi      =", phi)
print("phi^-1   =", invert_jet(phi))

images = phi_sharp(phi)
for kind in ("x", "dx", "D", "xi"):
    print(f"{kind:>3} ->", format_jet_element(images.generator_image(kind, 1), J))

relations = check_relations(images)
print("relations hold:", all(relations.values()))

# without the second-derivative correction the vector field no longer commutes correctly
broken = check_relations(phi_sharp(phi, drop_correction=True))
print("relations hold without correction:", all(broken.values()))

for (kind, i), v in vertex_generator_images(phi).items():
    print(f"{kind}_{i} ->", v)
