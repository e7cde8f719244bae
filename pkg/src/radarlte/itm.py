"""Longley-Rice irregular terrain model, area prediction mode.

Port of the ITS ITM version 1.2.2 algorithm (Hufford, Longley & Kissick,
"A Guide to the Use of the ITS Irregular Terrain Model in the Area
Prediction Mode", NTIA 1982). Only the area mode is provided; terrain
profiles are never read.

The model is split the same way as the reference code:

- ``_prepare`` computes wave number, effective earth curvature and surface
  impedance, then the effective heights and horizon geometry that area mode
  derives from the terrain irregularity ``dh``.
- :class:`AreaModel` builds the line-of-sight, diffraction and scatter
  reference-attenuation fits once, so that many distances can be evaluated
  against the same parameter set.
- ``_variability`` applies the climate-dependent median correction and the
  time/location/situation spreads.

All lengths are in metres inside this module; :func:`area_loss_db` takes
kilometres like the reference ``area()`` entry point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import IntEnum

from scipy.stats import norm


class Climate(IntEnum):
    EQUATORIAL = 1
    CONTINENTAL_SUBTROPICAL = 2
    MARITIME_SUBTROPICAL = 3
    DESERT = 4
    CONTINENTAL_TEMPERATE = 5
    MARITIME_TEMPERATE_LAND = 6
    MARITIME_TEMPERATE_SEA = 7


class Variability(IntEnum):
    SINGLE_MESSAGE = 0
    INDIVIDUAL = 1
    MOBILE = 2
    BROADCAST = 3


class ItmRangeError(ValueError):
    pass


# Climate tables, indexed by Climate - 1.
_BV1 = (-9.67, -0.62, 1.26, -9.21, -0.62, -0.39, 3.15)
_BV2 = (12.7, 9.19, 15.5, 9.05, 9.19, 2.86, 857.9)
_XV1 = (144.9e3, 228.9e3, 262.6e3, 84.1e3, 228.9e3, 141.7e3, 2222.0e3)
_XV2 = (190.3e3, 205.2e3, 185.2e3, 101.1e3, 205.2e3, 315.9e3, 164.8e3)
_XV3 = (133.8e3, 143.6e3, 99.8e3, 98.6e3, 143.6e3, 167.4e3, 116.3e3)
_BSM1 = (2.13, 2.66, 6.11, 1.98, 2.68, 6.86, 8.51)
_BSM2 = (159.5, 7.67, 6.65, 13.11, 7.16, 10.38, 169.8)
_XSM1 = (762.2e3, 100.4e3, 138.2e3, 139.1e3, 93.7e3, 187.8e3, 609.8e3)
_XSM2 = (123.6e3, 172.5e3, 242.2e3, 132.7e3, 186.8e3, 169.6e3, 119.9e3)
_XSM3 = (94.5e3, 136.4e3, 178.6e3, 193.5e3, 133.5e3, 108.9e3, 106.6e3)
_BSP1 = (2.11, 6.87, 10.08, 3.68, 4.75, 8.58, 8.43)
_BSP2 = (102.3, 15.53, 9.60, 159.3, 8.12, 13.97, 8.19)
_XSP1 = (636.9e3, 138.7e3, 165.3e3, 464.4e3, 93.2e3, 216.0e3, 136.2e3)
_XSP2 = (134.8e3, 143.7e3, 225.7e3, 93.1e3, 135.9e3, 152.0e3, 188.5e3)
_XSP3 = (95.6e3, 98.6e3, 129.7e3, 94.2e3, 113.4e3, 122.7e3, 122.9e3)
_BSD1 = (1.224, 0.801, 1.380, 1.000, 1.224, 1.518, 1.518)
_BZD1 = (1.282, 2.161, 1.282, 20.0, 1.282, 1.282, 1.282)
_BFM1 = (1.0, 1.0, 1.0, 1.0, 0.92, 1.0, 1.0)
_BFM2 = (0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0)
_BFM3 = (0.0, 0.0, 0.0, 0.0, 1.77, 0.0, 0.0)
_BFP1 = (1.0, 0.93, 1.0, 0.93, 0.93, 1.0, 1.0)
_BFP2 = (0.0, 0.31, 0.0, 0.19, 0.31, 0.0, 0.0)
_BFP3 = (0.0, 2.00, 0.0, 1.79, 2.00, 0.0, 0.0)

_THIRD = 1.0 / 3.0


def _dim(x: float, y: float) -> float:
    """Fortran DIM: positive difference."""
    return x - y if x > y else 0.0


def _curve(c1, c2, x1, x2, x3, de):
    return (c1 + c2 / (1.0 + ((de - x2) / x3) ** 2)) * (de / x1) ** 2 / (1.0 + (de / x1) ** 2)


def _aknfe(v2: float) -> float:
    # knife-edge diffraction attenuation, v2 = v^2
    if v2 < 5.76:
        return 6.02 + 9.11 * math.sqrt(v2) - 1.27 * v2
    return 12.953 + 4.343 * math.log(v2)


def _fht(x: float, pk: float) -> float:
    # height-gain function for smooth-earth diffraction
    if x < 200.0:
        w = -math.log(pk)
        if pk < 1e-5 or x * w**3 > 5495.0:
            value = -117.0
            if x > 1.0:
                value += 17.372 * math.log(x)
        else:
            value = 2.5e-5 * x * x / pk - 8.686 * w - 15.0
    else:
        value = 0.05751 * x - 4.343 * math.log(x)
        if x < 2000.0:
            w = 0.0134 * x * math.exp(-0.005 * x)
            value = (1.0 - w) * value + w * (17.372 * math.log(x) - 117.0)
    return value


_H0_A = (25.0, 80.0, 177.0, 395.0, 705.0)
_H0_B = (24.0, 45.0, 68.0, 80.0, 105.0)


def _h0f(r: float, et: float) -> float:
    # frequency-gain function for troposcatter
    it = int(et)
    if it <= 0:
        it, q = 1, 0.0
    elif it >= 5:
        it, q = 5, 0.0
    else:
        q = et - it
    x = (1.0 / r) ** 2
    value = 4.343 * math.log((_H0_A[it - 1] * x + _H0_B[it - 1]) * x + 1.0)
    if q != 0.0:
        value = (1.0 - q) * value + q * 4.343 * math.log((_H0_A[it] * x + _H0_B[it]) * x + 1.0)
    return value


def _ahd(td: float) -> float:
    # scatter attenuation as a function of angle-distance product
    if td <= 10e3:
        a, b, c = 133.4, 0.332e-3, -4.343
    elif td <= 70e3:
        a, b, c = 104.6, 0.212e-3, -1.086
    else:
        a, b, c = 71.8, 0.157e-3, 2.171
    return a + b * td + c * math.log(td)


@dataclass(frozen=True)
class AreaParams:
    """Inputs of one area-mode prediction (heights in metres)."""

    frequency_MHz: float
    tx_height_m: float
    rx_height_m: float
    terrain_irregularity_m: float
    dielectric: float = 15.0
    conductivity_S_m: float = 0.005
    refractivity_N: float = 301.0
    climate: Climate = Climate.CONTINENTAL_TEMPERATE
    polarization: int = 0  # 0 horizontal, 1 vertical
    tx_siting: int = 0  # 0 random, 1 careful, 2 very careful
    rx_siting: int = 0
    variability: Variability = Variability.SINGLE_MESSAGE


class AreaModel:
    """Reference attenuation and variability for one parameter set.

    Construction performs the distance-independent setup; :meth:`loss_db`
    is then cheap. A fresh instance reproduces the reference code's state
    machine for every call, so results do not depend on call order.
    """

    def __init__(self, params: AreaParams):
        if not 20.0 <= params.frequency_MHz <= 20000.0:
            raise ItmRangeError(
                f"frequency {params.frequency_MHz} MHz outside 20-20000 MHz")
        self.params = params
        self.warning = 0
        self._prepare()
        self._setup_diffraction()
        self._setup_los()
        self._setup_scatter()

    # -- preparation --------------------------------------------------------

    def _prepare(self):
        p = self.params
        self.wn = p.frequency_MHz / 47.7
        self.ens = p.refractivity_N
        self.gme = 157e-9 * (1.0 - 0.04665 * math.exp(self.ens / 179.3))
        zq = complex(p.dielectric, 376.62 * p.conductivity_S_m / self.wn)
        zgnd = cmath.sqrt(zq - 1.0)
        if p.polarization != 0:
            zgnd = zgnd / zq
        self.zgnd = zgnd

        self.dh = p.terrain_irregularity_m
        self.hg = (p.tx_height_m, p.rx_height_m)
        he, dl, the = [], [], []
        for hg, kst in zip(self.hg, (p.tx_siting, p.rx_siting)):
            if kst <= 0:
                h = hg
            else:
                q = 4.0 if kst == 1 else 9.0
                if hg < 5.0:
                    q *= math.sin(0.3141593 * hg)
                h = hg + (1.0 + q) * math.exp(-min(20.0, 2.0 * hg / max(1e-3, self.dh)))
            q = math.sqrt(2.0 * h / self.gme)
            d = q * math.exp(-0.07 * math.sqrt(self.dh / max(h, 5.0)))
            he.append(h)
            dl.append(d)
            the.append((0.65 * self.dh * (q / d - 1.0) - 2.0 * h) / q)
        self.he, self.dl, self.the = tuple(he), tuple(dl), tuple(the)

        self.dls = tuple(math.sqrt(2.0 * h / self.gme) for h in self.he)
        self.dlsa = self.dls[0] + self.dls[1]
        self.dla = self.dl[0] + self.dl[1]
        self.tha = max(self.the[0] + self.the[1], -self.dla * self.gme)

        for hg in self.hg:
            if hg < 1.0 or hg > 1000.0:
                self.warning = max(self.warning, 1)
        for j in range(2):
            if (abs(self.the[j]) > 200e-3 or self.dl[j] < 0.1 * self.dls[j]
                    or self.dl[j] > 3.0 * self.dls[j]):
                self.warning = max(self.warning, 3)
        if (self.ens < 250.0 or self.ens > 400.0 or self.gme < 75e-9
                or self.gme > 250e-9 or self.zgnd.real <= abs(self.zgnd.imag)
                or self.wn < 0.419 or self.wn > 420.0):
            self.warning = 4
        for hg in self.hg:
            if hg < 0.5 or hg > 3000.0:
                self.warning = 4
        self.dmin = abs(self.he[0] - self.he[1]) / 200e-3

    # -- diffraction --------------------------------------------------------

    def _setup_diffraction(self):
        q = self.hg[0] * self.hg[1]
        qk = self.he[0] * self.he[1] - q
        self._wd1 = math.sqrt(1.0 + qk / q)
        self._xd1 = self.dla + self.tha / self.gme
        q = (1.0 - 0.8 * math.exp(-self.dlsa / 50e3)) * self.dh
        q *= 0.78 * math.exp(-((q / 16.0) ** 0.25))
        self._afo = min(15.0, 2.171 * math.log(1.0 + 4.77e-4 * self.hg[0] * self.hg[1] * self.wn * q))
        self._qk = 1.0 / abs(self.zgnd)
        self._aht = 20.0
        self._xht = 0.0
        for j in range(2):
            a = 0.5 * self.dl[j] ** 2 / self.he[j]
            wa = (a * self.wn) ** _THIRD
            pk = self._qk / wa
            q = (1.607 - pk) * 151.0 * wa * self.dl[j] / a
            self._xht += q
            self._aht += _fht(q, pk)

        self.xae = (self.wn * self.gme**2) ** (-_THIRD)
        d3 = max(self.dlsa, 1.3787 * self.xae + self.dla)
        d4 = d3 + 2.7574 * self.xae
        a3 = self._adiff(d3)
        a4 = self._adiff(d4)
        self.emd = (a4 - a3) / (d4 - d3)
        self.aed = a3 - self.emd * d3

    def _adiff(self, d: float) -> float:
        th = self.tha + d * self.gme
        ds = d - self.dla
        q = 0.0795775 * self.wn * ds * th * th
        knife = (_aknfe(q * self.dl[0] / (ds + self.dl[0]))
                 + _aknfe(q * self.dl[1] / (ds + self.dl[1])))
        a = ds / th
        wa = (a * self.wn) ** _THIRD
        pk = self._qk / wa
        q = (1.607 - pk) * 151.0 * wa * th + self._xht
        rounded = 0.05751 * q - 4.343 * math.log(q) - self._aht
        q = (self._wd1 + self._xd1 / d) * min(
            (1.0 - 0.8 * math.exp(-d / 50e3)) * self.dh * self.wn, 6283.2)
        wd = 25.1 / (25.1 + math.sqrt(q))
        return rounded * wd + (1.0 - wd) * knife + self._afo

    # -- line of sight ------------------------------------------------------

    def _setup_los(self):
        self._wls = 0.021 / (0.021 + self.wn * self.dh / max(10e3, self.dlsa))
        d2 = self.dlsa
        a2 = self.aed + d2 * self.emd
        d0 = 1.908 * self.wn * self.he[0] * self.he[1]
        if self.aed >= 0.0:
            d0 = min(d0, 0.5 * self.dla)
            d1 = d0 + 0.25 * (self.dla - d0)
        else:
            d1 = max(-self.aed / self.emd, 0.25 * self.dla)
        a1 = self._alos(d1)
        wq = False
        if d0 < d1:
            a0 = self._alos(d0)
            q = math.log(d2 / d0)
            ak2 = max(0.0, ((d2 - d0) * (a1 - a0) - (d1 - d0) * (a2 - a0))
                      / ((d2 - d0) * math.log(d1 / d0) - (d1 - d0) * q))
            wq = self.aed >= 0.0 or ak2 > 0.0
            if wq:
                ak1 = (a2 - a0 - ak2 * q) / (d2 - d0)
                if ak1 < 0.0:
                    ak1 = 0.0
                    ak2 = _dim(a2, a0) / q
                    if ak2 == 0.0:
                        ak1 = self.emd
        if not wq:
            ak1 = _dim(a2, a1) / (d2 - d1)
            ak2 = 0.0
            if ak1 == 0.0:
                ak1 = self.emd
        self.ak1, self.ak2 = ak1, ak2
        self.ael = a2 - ak1 * d2 - ak2 * math.log(d2)

    def _alos(self, d: float) -> float:
        q = (1.0 - 0.8 * math.exp(-d / 50e3)) * self.dh
        s = 0.78 * q * math.exp(-((q / 16.0) ** 0.25))
        q = self.he[0] + self.he[1]
        sps = q / math.sqrt(d * d + q * q)
        r = (sps - self.zgnd) / (sps + self.zgnd) * math.exp(-min(10.0, self.wn * s * sps))
        q = abs(r) ** 2
        if q < 0.25 or q < sps:
            r = r * math.sqrt(sps / q)
        extrapolated = self.emd * d + self.aed
        q = self.wn * self.he[0] * self.he[1] * 2.0 / d
        if q > 1.57:
            q = 3.14 - 2.4649 / q
        two_ray = -4.343 * math.log(abs(complex(math.cos(q), -math.sin(q)) + r) ** 2)
        return (two_ray - extrapolated) * self._wls + extrapolated

    # -- troposcatter -------------------------------------------------------

    def _setup_scatter(self):
        ad = self.dl[0] - self.dl[1]
        rr = self.he[1] / self.he[0]
        if ad < 0.0:
            ad, rr = -ad, 1.0 / rr
        self._ad, self._rr = ad, rr
        self._etq = (5.67e-6 * self.ens - 2.32e-3) * self.ens + 0.031
        self._h0s = -15.0

        d5 = self.dla + 200e3
        d6 = d5 + 200e3
        a6 = self._ascat(d6)
        a5 = self._ascat(d5)
        if a5 < 1000.0:
            self.ems = (a6 - a5) / 200e3
            self.dx = max(self.dlsa,
                          self.dla + 0.3 * self.xae * math.log(47.7 * self.wn),
                          (a5 - self.aed - self.ems * d5) / (self.emd - self.ems))
            self.aes = (self.emd - self.ems) * self.dx + self.aed
        else:
            self.ems = self.emd
            self.aes = self.aed
            self.dx = 10e6

    def _ascat(self, d: float) -> float:
        # h0s carries state between calls, as in the reference code
        if self._h0s > 15.0:
            h0 = self._h0s
        else:
            th = self.the[0] + self.the[1] + d * self.gme
            r2 = 2.0 * self.wn * th
            r1 = r2 * self.he[0]
            r2 *= self.he[1]
            if r1 < 0.2 and r2 < 0.2:
                return 1001.0
            ss = (d - self._ad) / (d + self._ad)
            q = self._rr / ss
            ss = max(0.1, ss)
            q = min(max(0.1, q), 10.0)
            z0 = (d - self._ad) * (d + self._ad) * th * 0.25 / d
            et = (self._etq * math.exp(-min(1.7, z0 / 8e3) ** 6) + 1.0) * z0 / 1.7556e3
            ett = max(et, 1.0)
            h0 = (_h0f(r1, ett) + _h0f(r2, ett)) * 0.5
            h0 += min(h0, (1.38 - math.log(ett)) * math.log(ss) * math.log(q) * 0.49)
            h0 = _dim(h0, 0.0)
            if et < 1.0:
                h0 = et * h0 + (1.0 - et) * 4.343 * math.log(
                    ((1.0 + 1.4142 / r1) * (1.0 + 1.4142 / r2)) ** 2
                    * (r1 + r2) / (r1 + r2 + 2.8284))
            if h0 > 15.0 and self._h0s >= 0.0:
                h0 = self._h0s
        self._h0s = h0
        th = self.tha + d * self.gme
        return (_ahd(th * d) + 4.343 * math.log(47.7 * self.wn * th**4)
                - 0.1 * (self.ens - 301.0) * math.exp(-th * d / 40e3) + h0)

    # -- evaluation ---------------------------------------------------------

    def reference_attenuation_db(self, d_m: float) -> float:
        """Median attenuation relative to free space at ``d_m`` metres."""
        if d_m < self.dlsa:
            aref = self.ael + self.ak1 * d_m + self.ak2 * math.log(d_m)
        elif d_m > self.dx:
            aref = self.aes + self.ems * d_m
        else:
            aref = self.aed + self.emd * d_m
        return max(aref, 0.0)

    def _variability(self, aref: float, d_m: float, zt: float, zl: float, zc: float) -> float:
        p = self.params
        k = int(p.climate) - 1
        kdv = int(p.variability)
        q = math.log(0.133 * self.wn)
        gm = _BFM1[k] + _BFM2[k] / ((_BFM3[k] * q) ** 2 + 1.0)
        gp = _BFP1[k] + _BFP2[k] / ((_BFP3[k] * q) ** 2 + 1.0)
        dexa = (math.sqrt(18e6 * self.he[0]) + math.sqrt(18e6 * self.he[1])
                + (575.7e12 / self.wn) ** _THIRD)
        de = 130e3 * d_m / dexa if d_m < dexa else 130e3 + d_m - dexa
        vmd = _curve(_BV1[k], _BV2[k], _XV1[k], _XV2[k], _XV3[k], de)
        sgtm = _curve(_BSM1[k], _BSM2[k], _XSM1[k], _XSM2[k], _XSM3[k], de) * gm
        sgtp = _curve(_BSP1[k], _BSP2[k], _XSP1[k], _XSP2[k], _XSP3[k], de) * gp
        sgtd = sgtp * _BSD1[k]
        tgtd = (sgtp - sgtd) * _BZD1[k]
        q = (1.0 - 0.8 * math.exp(-d_m / 50e3)) * self.dh * self.wn
        sgl = 10.0 * q / (q + 13.0)
        vs0 = (5.0 + 3.0 * math.exp(-de / 100e3)) ** 2

        if kdv == 0:
            zt = zl = zc
        elif kdv == 1:
            zl = zc
        elif kdv == 2:
            zl = zt

        if zt < 0.0:
            sgt = sgtm
        elif zt <= _BZD1[k]:
            sgt = sgtp
        else:
            sgt = sgtd + tgtd / zt
        vs = vs0 + (sgt * zt) ** 2 / (7.8 + zc * zc) + (sgl * zl) ** 2 / (24.0 + zc * zc)
        if kdv == 0:
            yr = 0.0
            sgc = math.sqrt(sgt * sgt + sgl * sgl + vs)
        elif kdv == 1:
            yr = sgt * zt
            sgc = math.sqrt(sgl * sgl + vs)
        elif kdv == 2:
            yr = math.sqrt(sgt * sgt + sgl * sgl) * zt
            sgc = math.sqrt(vs)
        else:
            yr = sgt * zt + sgl * zl
            sgc = math.sqrt(vs)
        value = aref - vmd - yr - sgc * zc
        if value < 0.0:
            value = value * (29.0 - value) / (29.0 - 10.0 * value)
        return value

    def loss_db(self, distance_km: float, time_pct: float = 50.0,
                location_pct: float = 50.0, confidence_pct: float = 50.0) -> float:
        """Basic transmission loss in dB at ``distance_km``.

        Percentages follow the reference convention: the loss not exceeded
        for that fraction of time/locations/situations. 50/50/50 is the
        median.
        """
        if not 1.0 <= distance_km <= 2000.0:
            raise ItmRangeError(f"distance {distance_km} km outside 1-2000 km")
        d_m = distance_km * 1e3
        # qerfi(q) is the standard-normal upper quantile
        zt, zl, zc = (float(norm.isf(x / 100.0)) for x in (time_pct, location_pct, confidence_pct))
        aref = self.reference_attenuation_db(d_m)
        fs = 32.45 + 20.0 * math.log10(self.params.frequency_MHz) + 20.0 * math.log10(distance_km)
        return fs + self._variability(aref, d_m, zt, zl, zc)


def area_loss_db(params: AreaParams, distance_km: float, time_pct: float = 50.0,
                 location_pct: float = 50.0, confidence_pct: float = 50.0) -> float:
    """One-shot area-mode basic transmission loss (dB)."""
    return AreaModel(params).loss_db(distance_km, time_pct, location_pct, confidence_pct)
