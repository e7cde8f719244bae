"""Independent ITM area-mode reference built on the ``itmlogic`` package.

Used only to generate and re-check the golden file in ``tests/data``.
Mirrors the ITS ``area()`` driver: prepare, area setup, reference
attenuation, then variability around the free-space loss.
"""

import math

from itmlogic.lrprop import lrprop
from itmlogic.misc.qerfi import qerfi
from itmlogic.preparatory_subroutines.qlra import qlra
from itmlogic.preparatory_subroutines.qlrps import qlrps
from itmlogic.statistics.avar import avar


def reference_area_loss(frequency_MHz, tx_height_m, rx_height_m, dh_m, distance_km,
                        climate=5, polarization=0, siting=(0, 0), variability=0,
                        eps=15.0, sgm=0.005, ens=301.0, pct=(50.0, 50.0, 50.0)):
    prop = {
        "hg": [tx_height_m, rx_height_m], "dh": dh_m, "ens": ens,
        "klimx": climate, "klim": climate, "mdvarx": variability, "mdvar": variability,
        "lvar": 0, "kwx": 0, "mdp": -1,
    }
    prop["wn"], prop["gme"], prop["ens"], prop["zgnd"] = qlrps(
        frequency_MHz, 0, ens, polarization, eps, sgm)
    prop = qlra(list(siting), prop)
    prop = lrprop(distance_km * 1e3, prop)
    zt, zl, zc = (qerfi([p / 100.0])[0] for p in pct)
    result = avar(zt, zl, zc, prop)
    excess = result[0] if isinstance(result, tuple) else result
    fs = 32.45 + 20.0 * math.log10(frequency_MHz) + 20.0 * math.log10(distance_km)
    return fs + excess
