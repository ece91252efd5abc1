"""Balance, assemblability, and assembly steps for a generated model."""

from technicgen.analysis import analyze_model
from technicgen.fixtures import grid_sketch
from technicgen.ldraw import export_ldr
from technicgen.pipeline import generate

result = generate(grid_sketch(1), preset="simple", seed=0, cooling_rate=0.995)
report = result.report
balance = report.balance
print(f"balanced={balance.balanced} grounded={balance.grounded} "
      f"margin={balance.margin:.2f}")
print(f"COG={tuple(round(c, 2) for c in balance.center_of_gravity)}")
print(f"assemblable={report.assemblable} in {len(report.assembly_steps)} steps")
for step in report.assembly_steps[:6]:
    print(f"  step {step.index}: {step.brick.kind} {step.brick.ref} "
          f"from {step.direction}, {len(step.attaches)} attachments")
print("\nLDraw preview (first lines):")
print("\n".join(export_ldr(result.model).splitlines()[:8]))
