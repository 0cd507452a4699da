"""Sweeping barriers towards a test surface and locating the first contact.

Two scenarios run with the same machinery:

* a non-minimal ridge bulging towards the plane, for which the sweep finds an
  interior contact well away from every boundary;
* a reflected barrier opening away from the sweep, for which contact, if any,
  happens at the boundary circle: the two trumpets open in opposite
  directions, so no interior touching exists.

Each scenario takes roughly 15 s.

Run: python3 demos/half_space_sweep.py
"""

from nil3 import mesh, sweep


def show(name, make):
    cfg, S = make()
    rep = sweep.run_sweep(cfg, S)
    print(f"== {name}")
    print(mesh.emit_report(rep.as_dict()), end="")
    print("clearance curve:")
    for param, gap in rep.clearance_curve:
        print(f"  {param:10.4f}  {gap:.4e}")
    print()


show("ridge", sweep.ridge_scenario)
show("reflected barrier", sweep.reflected_barrier_scenario)
