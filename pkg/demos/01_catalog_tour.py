"""Tour of the brick catalog: line graphs, pin-head ratios, pose enumeration."""

from technicgen import default_catalog, enumerate_mechanism_poses

catalog = default_catalog()

print("Beams (id, holes):")
for beam in catalog.beams_by_length():
    types = "".join("A" if h.type == "axle" else "r" for h in beam.holes)
    print(f"  {beam.id:>6}  L={beam.length:<3} holes={types}")

print("\nConnection mechanisms (id, rho = pin heads / nodes):")
for mech in sorted(catalog.mechanisms.values(), key=lambda m: m.id):
    print(f"  {mech.id:>10}  rho={mech.rho}  ({mech.pin_head_count}/{mech.node_count})")

print("\nPose counts under the 24 axis-aligned rotations (duplicates removed):")
for mid in ("2780", "elbow", "tee", "elbow-long"):
    poses = enumerate_mechanism_poses(catalog.mechanism(mid), catalog)
    print(f"  {mid:>10}: {len(poses)} distinct poses")

single = catalog.brick("18654")
print(f"\nSingle-hole brick {single.id}: "
      f"{len(enumerate_mechanism_poses(single, catalog))} poses (one per axis)")
