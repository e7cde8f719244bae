"""Command-line entry point.

Subcommands:

``run``       one baseline/interfered pair with per-UE, CDF and SINR outputs
``sweep``     baseline plus every (distance, offset) point, loss table, exclusion zone
``patterns``  radar and eNB antenna pattern sweeps
``proploss``  FSPL / ITM / selected radar path loss versus distance
``schedule``  radar pulse schedule

Exit status: 0 on success, 1 for usage or scenario errors, 2 for runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from . import analysis, antennas, config, coupling, geometry, propagation, radar_emitter, scenario

OUTPUT_ENV = "RADARLTE_OUTPUT_DIR"
PRESETS = {
    "macro": {"lte": {"deployment": "macro"}},
    "small_cell": {"lte": {"deployment": "small_cell"}},
}

log = logging.getLogger("radarlte")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--scenario", default="macro",
                        help="scenario file, or a preset name: " + ", ".join(PRESETS))
    common.add_argument("--out", default=None,
                        help=f"output directory (default ${OUTPUT_ENV} or ./radarlte-out)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scenario field, e.g. radar.freq_offset_MHz=10")
    common.add_argument("--deployment", choices=config.DEPLOYMENTS,
                        help="shorthand for --set lte.deployment=...")
    common.add_argument("--seed", type=int, help="shorthand for --set sim.seed=...")
    common.add_argument("--duration", type=float, help="simulated seconds (sim.duration_s)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="radarlte", description="Radar to LTE uplink interference simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("run", parents=[common], help="baseline and interfered run")

    sw = sub.add_parser("sweep", parents=[common], help="distance/offset sweep")
    sw.add_argument("--distances", type=_float_list, help="km, comma separated")
    sw.add_argument("--offsets", type=_float_list, help="MHz, comma separated")
    sw.add_argument("--threshold", type=float, default=5.0,
                    help="mean loss (%%) defining the exclusion zone (default 5)")
    sw.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    pa = sub.add_parser("patterns", parents=[common], help="antenna pattern sweeps")
    pa.add_argument("--step", type=float, default=0.01, help="radar sweep step in degrees")

    pl = sub.add_parser("proploss", parents=[common], help="path loss versus distance")
    pl.add_argument("--max-km", type=float, default=300.0)
    pl.add_argument("--step-km", type=float, default=1.0)

    sc = sub.add_parser("schedule", parents=[common], help="radar pulse schedule")
    sc.add_argument("--schedule-duration", type=float, default=None,
                    help="seconds of schedule to export (default one rotation)")
    return p


def load_invocation_scenario(args) -> config.Scenario:
    """Scenario file or preset, then shorthand flags, then ``--set`` overrides."""
    if args.scenario in PRESETS:
        data = yaml.safe_load(yaml.safe_dump(PRESETS[args.scenario]))
    else:
        path = Path(args.scenario)
        if not path.is_file():
            raise UsageError(f"scenario file not found: {args.scenario}")
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise config.ScenarioParseError(f"malformed scenario text: {exc}") from exc
        if not isinstance(data, dict):
            raise config.ScenarioError("scenario must be a mapping")
    shorthand = []
    if args.deployment:
        shorthand.append(f"lte.deployment={args.deployment}")
    if args.seed is not None:
        shorthand.append(f"sim.seed={args.seed}")
    if args.duration is not None:
        shorthand.append(f"sim.duration_s={args.duration}")
    data = config.apply_overrides(data, shorthand + list(args.overrides))
    if args.command == "sweep" and args.distances:
        sim = data.setdefault("sim", {})
        sim["distances_km"] = sorted(set(args.distances) | set(sim.get("distances_km") or []))
        radar = data.setdefault("radar", {})
        if radar.get("distance_km") not in sim["distances_km"]:
            radar["distance_km"] = min(args.distances)
    return config.scenario_from_dict(data)


def output_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_ENV) or "radarlte-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_resolved(scn: config.Scenario, out: Path) -> None:
    (out / "scenario_resolved.yaml").write_text(config.dump_scenario(scn), encoding="utf-8")


def _write_yaml(path: Path, data) -> None:
    path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")


def cmd_run(scn: config.Scenario, out: Path, args) -> None:
    (base, _), (intf, sinr) = scenario.run_pair(scn, want_sinr=True)
    intf.write_csv(out / "throughput.csv", baseline=base)
    analysis.write_cdf_csv({"baseline": base, "interfered": intf}, out / "cdf.csv")
    if sinr and sinr[0] is not None:
        sinr[0].write_csv(out / "sinr_grid.csv")
    drop = scenario.build_drop(scn, 0)
    geometry.write_layout_csv(drop.layout, out / "layout.csv")
    cell = scenario.default_plot_cell(scn, drop.layout)
    summary = {
        "deployment": scn.lte.deployment,
        "seed": scn.sim.seed,
        "distance_km": scn.radar.distance_km,
        "freq_offset_MHz": scn.radar.freq_offset_MHz,
        "radar_enabled": scn.radar.enabled,
        "plot_cell": cell,
        "baseline": base.summary(),
        "interfered": intf.summary(),
        "mean_loss_percent": analysis.mean_loss_percent(intf, base),
    }
    if scn.radar.enabled:
        exp = scenario.radar_exposure(scn, drop)
        w0, w1 = (int(round(t * 1e3)) * scn.lte.symbols_per_subframe for t in scn.sim.sinr_window_s)
        coupling.write_grid_csv(exp.grid, cell, out / "radar_grid.csv", slice(w0, w1))
        summary["radar_path_loss_dB_plot_cell"] = float(exp.path_loss_dB[cell])
    _write_yaml(out / "summary.yaml", summary)
    print(f"mean UE throughput: baseline {base.mean_bps / 1e6:.4f} Mbit/s, "
          f"interfered {intf.mean_bps / 1e6:.4f} Mbit/s, "
          f"loss {summary['mean_loss_percent']:.3f}%")


def cmd_sweep(scn: config.Scenario, out: Path, args) -> None:
    result = scenario.run_sweep(scn, args.distances, args.offsets, jobs=max(1, args.jobs))
    result.write_csv(out / "sweep.csv")
    cdfs = {"baseline": result.baseline}
    cdfs.update({f"{k[0]:g}km_{k[1]:g}MHz": result.entries[k] for k in result.keys()})
    analysis.write_cdf_csv(cdfs, out / "cdf.csv")
    offsets = sorted({k[1] for k in result.keys()})
    zones = {}
    for off in offsets:
        losses = result.losses_by_distance(off)
        try:
            z = analysis.exclusion_zone_km(losses, args.threshold)
            zones[f"{off:g}"] = {
                "distance_km": z.distance_km if z.bounded else "beyond sweep",
                "bracket": [list(p) for p in z.bracket],
            }
        except analysis.NonMonotoneLossError as exc:
            zones[f"{off:g}"] = {"error": str(exc)}
    summary = {
        "deployment": scn.lte.deployment, "seed": scn.sim.seed, "drops": scn.sim.drops,
        "threshold_percent": args.threshold,
        "losses_percent": {f"{k[0]:g}km_{k[1]:g}MHz": result.loss_percent(k) for k in result.keys()},
        "exclusion_zone_km": zones,
    }
    _write_yaml(out / "summary.yaml", summary)
    for k in result.keys():
        print(f"{k[2]} {k[0]:g} km offset {k[1]:g} MHz: loss {result.loss_percent(k):.3f}%")
    for off, z in zones.items():
        print(f"exclusion zone at {args.threshold:g}% (offset {off} MHz): {z.get('distance_km', z.get('error'))}")


def cmd_patterns(scn: config.Scenario, out: Path, args) -> None:
    r = scn.radar
    theta = np.round(np.arange(-180.0, 180.0 + args.step / 2, args.step), 10)
    g = antennas.radar_normalized_gain_dB(theta, r.beamwidth_az_deg, r.backlobe_floor_dB)
    with open(out / "radar_pattern.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta_deg", "normalized_gain_dB"])
        w.writerows((f"{t:.4f}", f"{v:.6f}") for t, v in zip(theta, g))
    m = scn.lte.macro
    ant = antennas.SectorAntenna(m.gain_dBi, 0.0, m.theta3dB_az_deg, m.theta3dB_el_deg,
                                 m.downtilt_deg, m.am_dB)
    with open(out / "sector_pattern.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["plane", "angle_deg", "gain_dB"])
        for a in np.arange(-180.0, 181.0, 1.0):
            w.writerow(["azimuth", f"{a:g}", f"{ant.composite_gain_dB(a, -m.downtilt_deg):.6f}"])
        for a in np.arange(-90.0, 91.0, 0.5):
            w.writerow(["elevation", f"{a:g}", f"{ant.composite_gain_dB(0.0, a):.6f}"])
    theta_m, theta_f = antennas.radar_transition_angles(r.beamwidth_az_deg, r.backlobe_floor_dB)
    _write_yaml(out / "summary.yaml", {
        "theta_m_deg": theta_m, "theta_f_deg": theta_f,
        "gain_at_theta_m_dB": float(antennas.radar_normalized_gain_dB(theta_m, r.beamwidth_az_deg)),
    })
    print(f"radar pattern transitions: theta_m = {theta_m:.5f} deg, theta_f = {theta_f:.5f} deg")


def cmd_proploss(scn: config.Scenario, out: Path, args) -> None:
    prop = scn.propagation
    d = np.round(np.arange(args.step_km, args.max_km + args.step_km / 2, args.step_km), 9)
    d = d[d >= 1.0]
    propagation.write_loss_curve_csv(prop, d, out / "proploss.csv")
    horizon = propagation.los_horizon_km(prop.tx_height_m, prop.rx_height_m)
    _write_yaml(out / "summary.yaml", {"deployment": scn.lte.deployment, "horizon_km": float(horizon)})
    print(f"{scn.lte.deployment}: LoS horizon {horizon:.2f} km, {len(d)} distances written")


def cmd_schedule(scn: config.Scenario, out: Path, args) -> None:
    r = scn.radar
    duration = args.schedule_duration or r.rotation_period_s
    sched = radar_emitter.build_schedule(r, duration)
    radar_emitter.write_schedule_csv(sched, out / "schedule.csv")
    ppd = sched.pulses_per_dwell()
    _write_yaml(out / "summary.yaml", {
        "pulses": len(sched), "dwells": int(ppd.size), "dwell_s": r.dwell_s,
        "pulses_per_dwell": {int(k): int(v) for k, v in zip(*np.unique(ppd, return_counts=True))},
    })
    print(f"{len(sched)} pulses over {ppd.size} dwells")


COMMANDS = {
    "run": cmd_run, "sweep": cmd_sweep, "patterns": cmd_patterns,
    "proploss": cmd_proploss, "schedule": cmd_schedule,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        scn = load_invocation_scenario(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except config.ScenarioError as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return 1
    try:
        out = output_dir(args)
        write_resolved(scn, out)
        COMMANDS[args.command](scn, out, args)
    except Exception as exc:  # noqa: BLE001 - single-line diagnostic is the contract
        log.debug("failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
