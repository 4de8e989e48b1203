"""O-RAN aggregation hierarchy, nodal fanout cases, and per-segment modeling parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Union


class TopologyError(ValueError):
    """Structural topology problem (bad counts, non-divisible fanout)."""


class Node(Enum):
    """Hierarchy tiers, in aggregation order from radio edge to data center."""

    ORU = "oru"
    ODU = "odu"
    OCU = "ocu"
    DC = "dc"

    @property
    def depth(self) -> int:
        return NODE_ORDER.index(self)


NODE_ORDER: tuple[Node, ...] = (Node.ORU, Node.ODU, Node.OCU, Node.DC)


class Link(Enum):
    """Transport segments between consecutive hierarchy tiers."""

    FRONTHAUL = "fronthaul"
    MIDHAUL = "midhaul"
    BACKHAUL = "backhaul"


LINK_ORDER: tuple[Link, ...] = (Link.FRONTHAUL, Link.MIDHAUL, Link.BACKHAUL)

Segment = Union[Node, Link]

# Node whose aggregate traffic one link instance carries (and whose count
# gives the number of link instances): fronthaul carries one O-RU's flow,
# midhaul one O-DU aggregate, backhaul one O-CU aggregate.
LINK_LOAD_NODE: dict[Link, Node] = {
    Link.FRONTHAUL: Node.ORU,
    Link.MIDHAUL: Node.ODU,
    Link.BACKHAUL: Node.OCU,
}

# Downstream endpoint of each link; a segment still carries radio-rate eCPRI
# traffic when its endpoint sits at or before the baseband-processing node.
LINK_DOWNSTREAM_NODE: dict[Link, Node] = {
    Link.FRONTHAUL: Node.ODU,
    Link.MIDHAUL: Node.OCU,
    Link.BACKHAUL: Node.DC,
}


@dataclass(frozen=True)
class Topology:
    """Node counts and user population of one aggregation tree.

    ``n_users`` is derived as ``n_ru * users_per_ru`` when not given
    explicitly. ``du_fanout_cap`` records how many O-RUs each O-DU is
    provisioned to serve; ``None`` means O-DUs are sized for the O-RUs
    actually attached.
    """

    n_ru: int
    n_du: int
    n_cu: int
    n_dc: int
    users_per_ru: int
    n_users: int | None = None  # derived in __post_init__ when omitted
    du_fanout_cap: float | None = None

    def __post_init__(self):
        if self.n_users is None:
            object.__setattr__(self, "n_users", self.n_ru * self.users_per_ru)

    def node_count(self, node: Node) -> int:
        return {
            Node.ORU: self.n_ru,
            Node.ODU: self.n_du,
            Node.OCU: self.n_cu,
            Node.DC: self.n_dc,
        }[node]


def validate(topology: Topology) -> list[str]:
    """Return every violated structural invariant (empty list means valid)."""
    violations = []
    for name in ("n_ru", "n_du", "n_cu", "n_dc", "users_per_ru", "n_users"):
        count = getattr(topology, name)
        if not (isinstance(count, int) and count >= 1):
            violations.append(f"{name} must be an integer >= 1, got {count}")
    if topology.n_ru < topology.n_du:
        violations.append(f"n_ru >= n_du violated ({topology.n_ru} < {topology.n_du})")
    if topology.n_du < topology.n_cu:
        violations.append(f"n_du >= n_cu violated ({topology.n_du} < {topology.n_cu})")
    if topology.n_cu < topology.n_dc:
        violations.append(f"n_cu >= n_dc violated ({topology.n_cu} < {topology.n_dc})")
    if topology.n_users != topology.n_ru * topology.users_per_ru:
        violations.append(
            f"n_users = n_ru * users_per_ru violated "
            f"({topology.n_users} != {topology.n_ru} * {topology.users_per_ru})"
        )
    if topology.du_fanout_cap is not None and not topology.du_fanout_cap >= 1:
        violations.append(f"du_fanout_cap must be >= 1, got {topology.du_fanout_cap}")
    return violations


@dataclass(frozen=True)
class SegmentParams:
    """Modeling parameters of one node tier or transport segment.

    ``sigma`` covers cooling/conversion/distribution overhead, ``alpha`` the
    peak-versus-mean provisioning headroom, and ``coverage_node`` names the
    count whose ratio to the user population forms the coverage factor.
    The hop counts give extra devices per segment beyond the built-in one
    switch and one WDM link (plus one router where ``gamma`` is 1).
    """

    segment: Segment
    sigma: float
    alpha: float
    coverage_node: Node
    hops_switch: int = 0
    hops_wdm: int = 0
    hops_router: int = 0
    gamma: int = 0

    def __post_init__(self):
        if not self.sigma >= 1:
            raise TopologyError(f"{self.segment.value}: sigma must be >= 1, got {self.sigma}")
        if not self.alpha >= 1:
            raise TopologyError(f"{self.segment.value}: alpha must be >= 1, got {self.alpha}")
        for name in ("hops_switch", "hops_wdm", "hops_router"):
            hops = getattr(self, name)
            if not (isinstance(hops, int) and hops >= 0):
                raise TopologyError(f"{self.segment.value}: {name} must be an integer >= 0, got {hops}")
        if self.gamma not in (0, 1):
            raise TopologyError(f"{self.segment.value}: gamma must be 0 or 1, got {self.gamma}")


def default_segment_params() -> list[SegmentParams]:
    """Default overhead, overprovisioning, and coverage settings per segment.

    Routers participate on the backhaul only (gamma = 1 there); hop counts
    default to zero, i.e. one device of each class per segment.
    """
    return [
        SegmentParams(Node.ORU, sigma=1.0, alpha=5.0, coverage_node=Node.ORU),
        SegmentParams(Node.ODU, sigma=2.0, alpha=5.0, coverage_node=Node.ODU),
        SegmentParams(Node.OCU, sigma=2.0, alpha=5.0, coverage_node=Node.OCU),
        SegmentParams(Node.DC, sigma=1.5, alpha=1.3, coverage_node=Node.DC),
        SegmentParams(Link.FRONTHAUL, sigma=2.0, alpha=5.0, coverage_node=Node.ORU),
        SegmentParams(Link.MIDHAUL, sigma=2.0, alpha=5.0, coverage_node=Node.ODU),
        SegmentParams(Link.BACKHAUL, sigma=1.5, alpha=2.0, coverage_node=Node.OCU, gamma=1),
    ]


def segment_map(params: list[SegmentParams] | None = None) -> dict[Segment, SegmentParams]:
    """Key segment parameters by segment; defaults when ``params`` is omitted."""
    entries = default_segment_params() if params is None else params
    return {entry.segment: entry for entry in entries}


def coverage_factor(topology: Topology, params: SegmentParams) -> float:
    """Instance count of the segment's coverage node divided by the user count."""
    return topology.node_count(params.coverage_node) / topology.n_users


@dataclass(frozen=True)
class FanoutCase:
    """A nodal fanout configuration: children per parent at each tier."""

    label: str
    du_fanout: float
    cu_fanout: float
    dc_fanout: float

    def __post_init__(self):
        for name in ("du_fanout", "cu_fanout", "dc_fanout"):
            if not getattr(self, name) >= 1:
                raise TopologyError(f"{self.label}: {name} must be >= 1, got {getattr(self, name)}")


FANOUT_CASES: dict[str, FanoutCase] = {
    case.label: case
    for case in (
        FanoutCase("C-1", 1, 1, 1),
        FanoutCase("C-2", 1, 10, 1),
        FanoutCase("C-3", 1, 1, 10),
        FanoutCase("C-4", 10, 1, 1),
        FanoutCase("C-5", 2, 2, 2),
    )
}


def fanout_case(label: str) -> FanoutCase:
    try:
        return FANOUT_CASES[label]
    except KeyError:
        raise TopologyError(
            f"unknown fanout case {label!r}; expected one of {', '.join(FANOUT_CASES)}"
        ) from None


def build_sweep_topology(n_ru: int, users_per_ru: int, du_fanout_cap: int = 4) -> Topology:
    """Topology for the O-RU count sweep: one O-DU per ``du_fanout_cap`` O-RUs.

    Another O-DU is added whenever the O-RU count crosses a multiple of the
    cap; a single O-CU and a single DC aggregate the whole tree.
    """
    if n_ru < 1 or users_per_ru < 1 or du_fanout_cap < 1:
        raise TopologyError(
            f"n_ru, users_per_ru, du_fanout_cap must all be >= 1, "
            f"got ({n_ru}, {users_per_ru}, {du_fanout_cap})"
        )
    return Topology(
        n_ru=n_ru,
        n_du=math.ceil(n_ru / du_fanout_cap),
        n_cu=1,
        n_dc=1,
        users_per_ru=users_per_ru,
        du_fanout_cap=du_fanout_cap,
    )


def _divide_exact(count: int, fanout: float, level: str, case: FanoutCase) -> int:
    quotient = count / fanout
    if abs(quotient - round(quotient)) > 1e-9 or round(quotient) < 1:
        raise TopologyError(
            f"{case.label}: {count} nodes not divisible by {level} fanout {fanout}"
        )
    return int(round(quotient))


def from_fanout_case(case: FanoutCase, n_ru: int, users_per_ru: int) -> Topology:
    """Topology whose successive node-count ratios match the fanout case exactly."""
    if n_ru < 1 or users_per_ru < 1:
        raise TopologyError(f"n_ru and users_per_ru must be >= 1, got ({n_ru}, {users_per_ru})")
    n_du = _divide_exact(n_ru, case.du_fanout, "O-DU", case)
    n_cu = _divide_exact(n_du, case.cu_fanout, "O-CU", case)
    n_dc = _divide_exact(n_cu, case.dc_fanout, "DC", case)
    return Topology(
        n_ru=n_ru,
        n_du=n_du,
        n_cu=n_cu,
        n_dc=n_dc,
        users_per_ru=users_per_ru,
        du_fanout_cap=case.du_fanout,
    )


def with_overrides(params: Mapping[Segment, SegmentParams],
                   overrides: Mapping[Segment, dict]) -> dict[Segment, SegmentParams]:
    """Return a new segment map with per-segment field overrides applied."""
    updated = dict(params)
    for segment, fields in overrides.items():
        updated[segment] = replace(updated[segment], **fields)
    return updated
