"""Command-line surface: single evaluations, O-RU sweeps, and fanout studies as CSV."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Mapping, Sequence, TextIO

from .catalog import CatalogError, EquipmentCatalog, catalog_from_entries, default_catalog
from .configfile import ConfigEntry, ConfigError, float_value, int_value, parse_config_text
from .experiments import (
    DEFAULT_DU_FANOUT_CAP,
    DEFAULT_FANOUT_N_RU,
    DEFAULT_USERS_PER_RU,
    fanout_study,
    sweep_orus,
)
from .powermodel import (
    BbpPlacement,
    ModelConfig,
    PowerBreakdown,
    ProvisioningPolicy,
    TrafficModel,
    total_power_per_user,
)
from .topology import (
    LINK_ORDER,
    NODE_ORDER,
    Link,
    Node,
    Segment,
    SegmentParams,
    TopologyError,
    build_sweep_topology,
    fanout_case,
    segment_map,
    with_overrides,
)

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2

_POLICIES = {
    "linear": ProvisioningPolicy.all_linear,
    "quantized": ProvisioningPolicy.default,
}

_SEGMENT_BY_NAME: dict[str, Segment] = {node.value: node for node in NODE_ORDER}
_SEGMENT_BY_NAME.update({link.value: link for link in LINK_ORDER})

_SEGMENT_FLOAT_FIELDS = {"sigma", "alpha"}
_SEGMENT_INT_FIELDS = {"hops_switch": "hops_switch", "hops_wdm": "hops_wdm",
                       "hops_router": "hops_router"}

CSV_COLUMNS = (
    "p_processing_w", "p_transmission_w", "p_total_w",
    "p_node_oru_w", "p_node_odu_w", "p_node_ocu_w", "p_node_dc_w",
    "p_seg_fronthaul_w", "p_seg_midhaul_w", "p_seg_backhaul_w", "p_ue_w",
)


def _fmt(value: float) -> str:
    """Fixed 6-significant-digit rendering used for every power field."""
    return format(value, ".6g")


def _breakdown_fields(breakdown: PowerBreakdown) -> list[str]:
    return [
        _fmt(breakdown.processing_watts),
        _fmt(breakdown.transmission_watts),
        _fmt(breakdown.total_watts),
        _fmt(breakdown.node_watts(Node.ORU)),
        _fmt(breakdown.node_watts(Node.ODU)),
        _fmt(breakdown.node_watts(Node.OCU)),
        _fmt(breakdown.node_watts(Node.DC)),
        _fmt(breakdown.segment_watts(Link.FRONTHAUL)),
        _fmt(breakdown.segment_watts(Link.MIDHAUL)),
        _fmt(breakdown.segment_watts(Link.BACKHAUL)),
        _fmt(breakdown.ue_watts),
    ]


@dataclass
class RunConfig:
    """Resolved configuration for one invocation."""

    catalog: EquipmentCatalog
    params: Mapping[Segment, SegmentParams]
    n_ru: int | None = None
    users_per_ru: int | None = None
    du_fanout_cap: int = DEFAULT_DU_FANOUT_CAP


def _split_entries(entries: Mapping[str, ConfigEntry]):
    from .catalog import CATALOG_KEYS

    catalog_entries: dict[str, ConfigEntry] = {}
    topology_entries: dict[str, ConfigEntry] = {}
    segment_entries: dict[str, ConfigEntry] = {}
    for key, entry in entries.items():
        if key in CATALOG_KEYS:
            catalog_entries[key] = entry
        elif key.startswith("topology."):
            topology_entries[key] = entry
        elif key.startswith("segment."):
            segment_entries[key] = entry
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return catalog_entries, topology_entries, segment_entries


def _apply_topology_entries(run: RunConfig, entries: Mapping[str, ConfigEntry]) -> None:
    for key, entry in entries.items():
        if key == "topology.n_ru":
            run.n_ru = int_value(key, entry)
        elif key == "topology.users_per_ru":
            run.users_per_ru = int_value(key, entry)
        elif key == "topology.du_fanout_cap":
            run.du_fanout_cap = int_value(key, entry)
        else:
            raise ConfigError(f"unknown config key {key!r}")


def _segment_overrides(entries: Mapping[str, ConfigEntry]) -> dict[Segment, dict]:
    overrides: dict[Segment, dict] = {}
    for key, entry in entries.items():
        parts = key.split(".")
        if len(parts) != 3 or parts[1] not in _SEGMENT_BY_NAME:
            raise ConfigError(f"unknown config key {key!r}")
        segment = _SEGMENT_BY_NAME[parts[1]]
        field = parts[2]
        if field in _SEGMENT_FLOAT_FIELDS:
            value = float_value(key, entry)
        elif field in _SEGMENT_INT_FIELDS:
            value = int_value(key, entry)
        else:
            raise ConfigError(f"unknown config key {key!r}")
        overrides.setdefault(segment, {})[field] = value
    return overrides


def load_run_config(config_path: str | None) -> RunConfig:
    """Read the optional config file and resolve catalog/topology/segment overrides."""
    if config_path is None:
        return RunConfig(catalog=default_catalog(), params=segment_map())
    with open(config_path, encoding="utf-8") as handle:
        text = handle.read()
    catalog_entries, topology_entries, segment_entries = _split_entries(parse_config_text(text))
    run = RunConfig(
        catalog=catalog_from_entries(catalog_entries),
        params=with_overrides(segment_map(), _segment_overrides(segment_entries)),
    )
    _apply_topology_entries(run, topology_entries)
    return run


def _model_config(run: RunConfig, policy_name: str, provision_to_cap: bool = True) -> ModelConfig:
    return ModelConfig(
        catalog=run.catalog,
        params=run.params,
        traffic=TrafficModel(),
        policy=_POLICIES[policy_name](),
        provision_to_cap=provision_to_cap,
    )


def _parse_placements(raw: str, parser: argparse.ArgumentParser) -> list[BbpPlacement]:
    placements = []
    for token in raw.split(","):
        token = token.strip().lower()
        if token not in _SEGMENT_BY_NAME or not isinstance(_SEGMENT_BY_NAME[token], Node):
            parser.error(f"invalid placement {token!r}; expected oru, odu, ocu, dc")
        placements.append(_SEGMENT_BY_NAME[token])
    return [node for node in NODE_ORDER if node in set(placements)]


def _emit(text: str, output: str | None, stdout: TextIO) -> None:
    if output is None or output == "stdout":
        stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _render_eval_table(topology, placement: BbpPlacement, policy_name: str,
                       breakdown: PowerBreakdown) -> str:
    lines = [
        f"bbp placement : {placement.value}",
        f"topology      : n_ru={topology.n_ru} n_du={topology.n_du} n_cu={topology.n_cu} "
        f"n_dc={topology.n_dc} users_per_ru={topology.users_per_ru} n_users={topology.n_users}",
        f"policy        : {policy_name}",
        "",
        "processing (W per user)",
    ]
    for entry in breakdown.nodes:
        lines.append(f"  {entry.node.value:<10} {entry.branch:<7} {_fmt(entry.watts)}")
    lines.append("transmission (W per user)")
    for entry in breakdown.segments:
        traffic_kind = "ecpri" if entry.before_bbp else "baseband"
        lines.append(f"  {entry.segment.value:<10} {traffic_kind:<8} {_fmt(entry.watts)}")
    lines.append(f"  {'ue':<10} {'':<8} {_fmt(breakdown.ue_watts)}")
    lines.append("totals (W per user)")
    lines.append(f"  processing   {_fmt(breakdown.processing_watts)}")
    lines.append(f"  transmission {_fmt(breakdown.transmission_watts)}")
    lines.append(f"  total        {_fmt(breakdown.total_watts)}")
    return "\n".join(lines) + "\n"


def cmd_eval(args, parser: argparse.ArgumentParser, stdout: TextIO) -> int:
    run = load_run_config(args.config)
    config = _model_config(run, args.policy)
    topology = build_sweep_topology(args.n_ru, args.users_per_ru, run.du_fanout_cap)
    placement = _SEGMENT_BY_NAME[args.bbp]
    breakdown = total_power_per_user(topology, config.traffic, config.catalog, config.params,
                                     placement, config.policy,
                                     provision_to_cap=not args.attached_load)
    if args.format == "table":
        text = _render_eval_table(topology, placement, args.policy, breakdown)
    else:
        header = "n_ru,placement," + ",".join(CSV_COLUMNS)
        row = ",".join([str(args.n_ru), placement.value] + _breakdown_fields(breakdown))
        text = header + "\n" + row + "\n"
    _emit(text, args.output, stdout)
    return EXIT_OK


def cmd_sweep(args, parser: argparse.ArgumentParser, stdout: TextIO) -> int:
    if args.max_ru < 1:
        parser.error(f"--max-ru must be >= 1, got {args.max_ru}")
    run = load_run_config(args.config)
    config = _model_config(run, args.policy, provision_to_cap=not args.attached_load)
    users_per_ru = args.users_per_ru if args.users_per_ru is not None else (
        run.users_per_ru if run.users_per_ru is not None else DEFAULT_USERS_PER_RU)
    placements = _parse_placements(args.placements, parser)
    records = sweep_orus(range(1, args.max_ru + 1), users_per_ru, placements, config,
                         du_fanout_cap=run.du_fanout_cap)
    lines = [
        f"# max_ru = {args.max_ru}",
        f"# users_per_ru = {users_per_ru}",
        f"# policy = {args.policy}",
        f"# du_fanout_cap = {run.du_fanout_cap}",
        "# n_cu = 1  (single-aggregation sweep convention)",
        "# n_dc = 1  (single-aggregation sweep convention)",
        "n_ru,placement," + ",".join(CSV_COLUMNS),
    ]
    for record in records:
        lines.append(",".join([str(record.n_ru), record.placement.value]
                              + _breakdown_fields(record.breakdown)))
    _emit("\n".join(lines) + "\n", args.output, stdout)
    return EXIT_OK


def cmd_fanout(args, parser: argparse.ArgumentParser, stdout: TextIO) -> int:
    run = load_run_config(args.config)
    config = _model_config(run, args.policy, provision_to_cap=not args.attached_load)
    users_per_ru = args.users_per_ru if args.users_per_ru is not None else (
        run.users_per_ru if run.users_per_ru is not None else DEFAULT_USERS_PER_RU)
    n_ru = args.n_ru if args.n_ru is not None else (
        run.n_ru if run.n_ru is not None else DEFAULT_FANOUT_N_RU)
    cases = [fanout_case(label.strip()) for label in args.cases.split(",")]
    placements = _parse_placements(args.placements, parser)
    records = fanout_study(cases, n_ru, users_per_ru, placements, config)
    lines = [
        f"# n_ru = {n_ru}",
        f"# users_per_ru = {users_per_ru}",
        f"# policy = {args.policy}",
        "case,placement,p_processing_w,p_transmission_w,p_total_w",
    ]
    for record in records:
        lines.append(",".join([
            record.case,
            record.placement.value,
            _fmt(record.breakdown.processing_watts),
            _fmt(record.breakdown.transmission_watts),
            _fmt(record.breakdown.total_watts),
        ]))
    _emit("\n".join(lines) + "\n", args.output, stdout)
    return EXIT_OK


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key-value config file")
    parser.add_argument("--policy", choices=sorted(_POLICIES), default="quantized",
                        help="provisioning policy (default: quantized servers)")
    parser.add_argument("--output", default=None,
                        help="output path, or 'stdout' (default)")
    parser.add_argument("--attached-load", action="store_true",
                        help="size O-DUs for attached O-RUs instead of the fanout cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oranpower",
        description="Per-user power for centralized O-RAN deployments under "
                    "different baseband-processing placements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one topology and placement")
    p_eval.add_argument("--n-ru", type=int, required=True, help="number of O-RUs")
    p_eval.add_argument("--users-per-ru", type=int, required=True, help="users per O-RU")
    p_eval.add_argument("--bbp", choices=[node.value for node in NODE_ORDER], required=True,
                        help="baseband-processing node")
    p_eval.add_argument("--format", choices=["table", "csv"], default="table")
    _add_common_flags(p_eval)
    p_eval.set_defaults(handler=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="sweep the O-RU count and emit CSV")
    p_sweep.add_argument("--max-ru", type=int, default=100, help="sweep n_ru from 1 to this")
    p_sweep.add_argument("--users-per-ru", type=int, default=None)
    p_sweep.add_argument("--placements", default="oru,odu,ocu,dc",
                         help="comma-separated subset of oru,odu,ocu,dc")
    _add_common_flags(p_sweep)
    p_sweep.set_defaults(handler=cmd_sweep)

    p_fanout = sub.add_parser("fanout", help="evaluate the nodal fanout cases and emit CSV")
    p_fanout.add_argument("--cases", default="C-1,C-2,C-3,C-4,C-5",
                          help="comma-separated case labels")
    p_fanout.add_argument("--n-ru", type=int, default=None,
                          help=f"O-RU count (default {DEFAULT_FANOUT_N_RU})")
    p_fanout.add_argument("--users-per-ru", type=int, default=None)
    p_fanout.add_argument("--placements", default="oru,odu,ocu,dc")
    _add_common_flags(p_fanout)
    p_fanout.set_defaults(handler=cmd_fanout)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
         stderr: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.handler(args, parser, stdout)
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code) if exc.code is not None else EXIT_OK
    except (ConfigError, CatalogError, TopologyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
