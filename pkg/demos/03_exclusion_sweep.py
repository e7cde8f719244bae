"""Sweep radar distance for both deployments and estimate an exclusion zone.

The threshold is 1% mean-throughput loss. A 5% threshold would already be
met at 50 km with the default parameters, leaving nothing to interpolate.
Run with ``python demos/03_exclusion_sweep.py`` (about a minute).
"""

from radarlte.analysis import exclusion_zone_km
from radarlte.config import load_scenario
from radarlte.scenario import run_sweep

THRESHOLD = 1.0
DISTANCES = [50.0, 100.0, 150.0, 200.0]

for deployment in ("macro", "small_cell"):
    scn = load_scenario(f"lte: {{deployment: {deployment}}}\nsim: {{seed: 1, duration_s: 1.0}}")
    res = run_sweep(scn, DISTANCES, jobs=4)
    losses = res.losses_by_distance(deployment=deployment)
    print(f"\n{deployment}")
    for d, v in losses.items():
        print(f"  {d:5.0f} km  {v:6.3f}% loss")
    zone = exclusion_zone_km(losses, THRESHOLD)
    print(f"  loss drops to {THRESHOLD}% at about {zone.distance_km:.1f} km")
