"""Regenerate ``itm_golden.csv`` from the independent ITM reference.

Run from the repository root: ``python tests/data/make_itm_golden.py``.
Needs the ``itmlogic`` package (``pip install itmlogic``).
"""

import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from itm_oracle import reference_area_loss  # noqa: E402

DISTANCES_KM = [1, 2, 5, 10, 15, 20, 30, 40, 45, 50, 60, 70, 80, 100, 120, 150, 175, 200, 250, 300]
CASES = {
    # name: (rx height m, terrain irregularity m)
    "macro": (25.0, 10.0),
    "small_cell": (10.0, 20.0),
}


def main():
    out = Path(__file__).with_name("itm_golden.csv")
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["deployment", "distance_km", "frequency_MHz", "tx_height_m", "rx_height_m",
                    "terrain_irregularity_m", "loss_dB"])
        for name, (hrx, dh) in CASES.items():
            for d in DISTANCES_KM:
                loss = reference_area_loss(3500.0, 50.0, hrx, dh, float(d))
                w.writerow([name, d, 3500.0, 50.0, hrx, dh, f"{loss:.4f}"])
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
