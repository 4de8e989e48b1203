"""Experiment harnesses: the O-RU count sweep, the nodal fanout study, and a
brute-force network enumeration used to cross-check the closed-form model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .catalog import EquipmentCatalog, ServerSpec
from .powermodel import (
    GBPS_TO_BITS_PER_S,
    BbpPlacement,
    ClassPolicy,
    ModelConfig,
    PowerBreakdown,
    ProvisioningPolicy,
    TrafficModel,
    bbp_branch,
    link_precedes_bbp,
    node_ecpri_load,
    node_interface_spec,
    node_server_spec,
    provision_units,
    segment_switch_spec,
)
from .topology import (
    LINK_LOAD_NODE,
    LINK_ORDER,
    NODE_ORDER,
    FanoutCase,
    Segment,
    SegmentParams,
    Topology,
    build_sweep_topology,
    from_fanout_case,
)

# Smallest O-RU count divisible by every built-in fanout chain (C-2/C-3/C-4
# need 10, C-5 needs 8).
DEFAULT_FANOUT_N_RU = 40
DEFAULT_USERS_PER_RU = 10
DEFAULT_DU_FANOUT_CAP = 4


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated (O-RU count, BBP placement) cell of the sweep."""

    n_ru: int
    placement: BbpPlacement
    breakdown: PowerBreakdown


@dataclass(frozen=True)
class FanoutStudyRecord:
    """One evaluated (fanout case, BBP placement) cell of the fanout study."""

    case: str
    placement: BbpPlacement
    breakdown: PowerBreakdown


def _ordered_placements(placements: Iterable[BbpPlacement]) -> list[BbpPlacement]:
    wanted = set(placements)
    return [node for node in NODE_ORDER if node in wanted]


def sweep_orus(n_ru_range: Iterable[int], users_per_ru: int,
               placements: Iterable[BbpPlacement], config: ModelConfig,
               du_fanout_cap: int = DEFAULT_DU_FANOUT_CAP) -> list[SweepRecord]:
    """Evaluate every (n_ru, placement) pair over sweep topologies.

    Records are ordered by (n_ru, placement depth) regardless of the input
    iteration order, so identical inputs produce identical lists.
    """
    counts = sorted(set(n_ru_range))
    if not counts:
        raise ValueError("n_ru_range must be non-empty")
    ordered = _ordered_placements(placements)
    records = []
    for n_ru in counts:
        topology = build_sweep_topology(n_ru, users_per_ru, du_fanout_cap)
        for placement in ordered:
            records.append(SweepRecord(n_ru, placement, config.evaluate(topology, placement)))
    return records


def fanout_study(cases: Sequence[FanoutCase], n_ru: int, users_per_ru: int,
                 placements: Iterable[BbpPlacement], config: ModelConfig) -> list[FanoutStudyRecord]:
    """Evaluate every (fanout case, placement) pair at a fixed O-RU count.

    The O-RU placement is included for completeness; its breakdown carries no
    coverage-weighted term beyond the O-RU itself, so it repeats identically
    across cases.
    """
    ordered = _ordered_placements(placements)
    records = []
    for case in cases:
        topology = from_fanout_case(case, n_ru, users_per_ru)
        for placement in ordered:
            records.append(FanoutStudyRecord(case.label, placement,
                                             config.evaluate(topology, placement)))
    return records


def reduction_ratio(a: PowerBreakdown, b: PowerBreakdown) -> float:
    """Fractional total-power reduction of ``b`` relative to ``a``."""
    if not a.total_watts > 0:
        raise ValueError(f"baseline total must be > 0, got {a.total_watts}")
    return 1.0 - b.total_watts / a.total_watts


def _device_watts(load_gbps: float, rated_power_w: float, capacity_gbps: float,
                  policy: ClassPolicy) -> float:
    # Deliberately re-derived here instead of calling powermodel.equipment_power,
    # so the enumeration stays an independent check of the closed form.
    if not policy.quantized:
        return load_gbps * rated_power_w / capacity_gbps
    unit = policy.unit_capacity_gbps if policy.unit_capacity_gbps is not None else capacity_gbps
    units = provision_units(load_gbps, unit, policy.minimum_units)
    return units * (rated_power_w / capacity_gbps) * unit


def _server_watts(load_gbps: float, server: ServerSpec, policy: ClassPolicy) -> float:
    total_power = server.cores * server.per_core_power_w
    return _device_watts(load_gbps, total_power, server.server_capacity_gbps, policy)


def brute_force_oracle(topology: Topology, traffic: TrafficModel,
                       catalog: EquipmentCatalog,
                       params: Mapping[Segment, SegmentParams],
                       placement: BbpPlacement, policy: ProvisioningPolicy,
                       provision_to_cap: bool = True) -> float:
    """Network-total watts by explicit enumeration of every device and user.

    Walks each physical node instance, each transport device on each link
    instance (including every extra hop device), each user's share of the
    multiplexed downstream equipment, and each UE, without using the
    closed-form per-user expressions. Dividing the result by the user count
    must reproduce ``total_power_per_user(...).total_watts``.
    """
    n_users = topology.n_users
    user_rate = traffic.user_rate_gbps
    total = 0.0

    for node in NODE_ORDER:
        seg = params[node]
        scale = seg.alpha * seg.sigma
        interface = node_interface_spec(catalog, node)
        branch = bbp_branch(node, placement)
        if branch == "after":
            share = scale * user_rate * interface.rated_power_w / interface.capacity_gbps
            for _ in range(n_users):
                total += share
            continue
        load = node_ecpri_load(topology, traffic, node, provision_to_cap)
        instance_watts = _device_watts(load.load_gbps, interface.rated_power_w,
                                       interface.capacity_gbps, policy.node_interface)
        if branch == "bbp":
            instance_watts += _server_watts(load.load_gbps, node_server_spec(catalog, node),
                                            policy.servers)
        for _ in range(load.instances):
            total += scale * instance_watts

    for link in LINK_ORDER:
        seg = params[link]
        scale = seg.alpha * seg.sigma
        switch = segment_switch_spec(catalog, link)
        wdm = catalog.wdm_link
        router = catalog.router
        if link_precedes_bbp(link, placement):
            load = node_ecpri_load(topology, traffic, LINK_LOAD_NODE[link], provision_to_cap)
            for _ in range(load.instances):
                for _ in range(seg.hops_switch + 1):
                    total += scale * _device_watts(load.load_gbps, switch.rated_power_w,
                                                   switch.capacity_gbps, policy.switches)
                for _ in range(seg.hops_wdm + 1):
                    total += scale * _device_watts(load.load_gbps, wdm.rated_power_w,
                                                   wdm.capacity_gbps, policy.links)
                if seg.gamma:
                    for _ in range(seg.hops_router + 1):
                        total += scale * _device_watts(load.load_gbps, router.rated_power_w,
                                                       router.capacity_gbps, policy.routers)
        else:
            for _ in range(n_users):
                for _ in range(seg.hops_switch + 1):
                    total += scale * user_rate * switch.rated_power_w / switch.capacity_gbps
                for _ in range(seg.hops_wdm + 1):
                    total += scale * user_rate * wdm.rated_power_w / wdm.capacity_gbps
                if seg.gamma:
                    for _ in range(seg.hops_router + 1):
                        total += scale * user_rate * router.rated_power_w / router.capacity_gbps

    ue_watts = user_rate * GBPS_TO_BITS_PER_S * catalog.ue_energy_j_per_bit
    for _ in range(n_users):
        total += ue_watts
    return total
