"""Property-based tests for model invariants across randomized inputs."""

from dataclasses import replace

from hypothesis import given, settings
from hypothesis import strategies as st

from oranpower.catalog import EquipmentSpec, ServerSpec, default_catalog, dump_catalog, load_catalog
from oranpower.experiments import brute_force_oracle
from oranpower.powermodel import (
    ClassPolicy,
    ModelConfig,
    ProvisioningPolicy,
    TrafficModel,
    bbp_server_power,
    equipment_power,
    total_power_per_user,
)
from oranpower.topology import Node, Topology, build_sweep_topology, segment_map

PLACEMENTS = list(Node)


def rel_close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


@st.composite
def topologies(draw):
    """Valid aggregation trees built from per-tier multipliers."""
    n_dc = draw(st.integers(1, 3))
    n_cu = n_dc * draw(st.integers(1, 3))
    n_du = n_cu * draw(st.integers(1, 4))
    n_ru = n_du * draw(st.integers(1, 4))
    users_per_ru = draw(st.integers(1, 20))
    cap = draw(st.one_of(st.none(), st.integers(1, 8)))
    return Topology(n_ru=n_ru, n_du=n_du, n_cu=n_cu, n_dc=n_dc,
                    users_per_ru=users_per_ru, du_fanout_cap=cap)


@st.composite
def class_policies(draw):
    if not draw(st.booleans()):
        return ClassPolicy.linear()
    unit = draw(st.one_of(st.none(), st.floats(0.1, 50.0, allow_nan=False)))
    return ClassPolicy.quantize(unit_capacity_gbps=unit,
                                minimum_units=draw(st.integers(0, 2)))


@st.composite
def policies(draw):
    return ProvisioningPolicy(
        servers=draw(class_policies()),
        node_interface=draw(class_policies()),
        switches=draw(class_policies()),
        links=draw(class_policies()),
        routers=draw(class_policies()),
    )


class TestQuantizedVersusLinear:
    @given(
        load_units=st.integers(0, 40),
        fraction=st.floats(0.01, 0.99),
        exact=st.booleans(),
        unit=st.floats(0.1, 30.0, allow_nan=False),
        minimum=st.integers(0, 3),
    )
    def test_quantized_never_below_linear(self, load_units, fraction, exact, unit, minimum):
        load = load_units * unit if exact else (load_units + fraction) * unit
        spec = default_catalog().core_switch
        policy = ClassPolicy.quantize(unit_capacity_gbps=unit, minimum_units=minimum)
        quantized = equipment_power(load, spec, policy)
        linear = equipment_power(load, spec, ClassPolicy.linear())
        assert quantized >= linear - 1e-12 * max(linear, 1.0)
        floor_binds = minimum * unit > load + 1e-12 * max(load, 1.0)
        if exact and not floor_binds:
            assert rel_close(quantized, linear, tol=1e-9)
        elif not exact:
            assert quantized > linear * (1 + 1e-12)

    @given(load=st.floats(0.0, 500.0, allow_nan=False), minimum=st.integers(0, 2))
    def test_server_quantized_never_below_linear(self, load, minimum):
        server = default_catalog().dc_server
        quantized = bbp_server_power(load, server, ClassPolicy.quantize(minimum_units=minimum))
        linear = bbp_server_power(load, server, ClassPolicy.linear())
        assert quantized >= linear - 1e-12 * max(linear, 1.0)


class TestBreakdownInvariants:
    @given(topology=topologies(), placement=st.sampled_from(PLACEMENTS), policy=policies())
    @settings(max_examples=60, deadline=None)
    def test_decomposition(self, topology, placement, policy):
        config = ModelConfig.default(policy=policy)
        breakdown = config.evaluate(topology, placement)
        assert rel_close(breakdown.total_watts,
                         breakdown.processing_watts + breakdown.transmission_watts)
        assert rel_close(breakdown.processing_watts,
                         sum(entry.watts for entry in breakdown.nodes))
        assert rel_close(breakdown.transmission_watts,
                         breakdown.ue_watts + sum(entry.watts for entry in breakdown.segments))

    @given(topology=topologies(), placement=st.sampled_from(PLACEMENTS), policy=policies())
    @settings(max_examples=40, deadline=None)
    def test_branch_assignment(self, topology, placement, policy):
        config = ModelConfig.default(policy=policy)
        breakdown = config.evaluate(topology, placement)
        branches = [entry.branch for entry in breakdown.nodes]
        assert branches.count("bbp") == 1
        assert branches[placement.depth] == "bbp"


class TestTransmissionShape:
    @given(n_ru=st.integers(1, 150), users_per_ru=st.integers(1, 20))
    @settings(max_examples=40, deadline=None)
    def test_edge_placement_independent_of_ru_count(self, n_ru, users_per_ru):
        config = ModelConfig.default()
        reference = config.evaluate(build_sweep_topology(1, users_per_ru, 4), Node.ORU)
        topo = build_sweep_topology(n_ru, users_per_ru, 4)
        breakdown = config.evaluate(topo, Node.ORU)
        assert breakdown.transmission_watts == reference.transmission_watts

    @given(n_ru=st.integers(1, 150))
    @settings(max_examples=40, deadline=None)
    def test_deeper_placement_never_cheaper_to_transport(self, n_ru):
        config = ModelConfig.default(policy=ProvisioningPolicy.all_linear())
        topo = build_sweep_topology(n_ru, 10, 4)
        series = [config.evaluate(topo, placement).transmission_watts
                  for placement in PLACEMENTS]
        for shallow, deep in zip(series, series[1:]):
            assert shallow <= deep * (1 + 1e-12)


class TestScalingAndZero:
    @given(topology=topologies(), placement=st.sampled_from(PLACEMENTS))
    @settings(max_examples=40, deadline=None)
    def test_doubling_rated_power_doubles_everything_but_ue(self, topology, placement):
        config = ModelConfig.default()
        base = config.evaluate(topology, placement)
        catalog = config.catalog
        doubled = replace(
            catalog,
            radio=replace(catalog.radio, rated_power_w=2 * catalog.radio.rated_power_w),
            access_switch=replace(catalog.access_switch,
                                  rated_power_w=2 * catalog.access_switch.rated_power_w),
            core_switch=replace(catalog.core_switch,
                                rated_power_w=2 * catalog.core_switch.rated_power_w),
            wdm_link=replace(catalog.wdm_link, rated_power_w=2 * catalog.wdm_link.rated_power_w),
            router=replace(catalog.router, rated_power_w=2 * catalog.router.rated_power_w),
            edge_server=replace(catalog.edge_server,
                                per_core_power_w=2 * catalog.edge_server.per_core_power_w),
            dc_server=replace(catalog.dc_server,
                              per_core_power_w=2 * catalog.dc_server.per_core_power_w),
        )
        scaled = ModelConfig(doubled, config.params, config.traffic, config.policy)
        result = scaled.evaluate(topology, placement)
        assert rel_close(result.total_watts - result.ue_watts,
                         2 * (base.total_watts - base.ue_watts))
        assert result.ue_watts == base.ue_watts

    @given(topology=topologies(), placement=st.sampled_from(PLACEMENTS))
    @settings(max_examples=20, deadline=None)
    def test_zero_traffic_zero_power_linear(self, topology, placement):
        config = ModelConfig(
            catalog=default_catalog(),
            params=segment_map(),
            traffic=TrafficModel(monthly_gb_per_user=0, ecpri_per_ru_gbps=0),
            policy=ProvisioningPolicy.all_linear(),
        )
        assert config.evaluate(topology, placement).total_watts == 0.0


class TestOracleAgreement:
    @given(topology=topologies(), placement=st.sampled_from(PLACEMENTS), policy=policies())
    @settings(max_examples=30, deadline=None)
    def test_enumeration_matches_closed_form(self, topology, placement, policy):
        config = ModelConfig.default(policy=policy)
        oracle = brute_force_oracle(topology, config.traffic, config.catalog, config.params,
                                    placement, config.policy)
        closed = config.evaluate(topology, placement).total_watts
        assert rel_close(oracle / topology.n_users, closed)


class TestCatalogRoundTrip:
    @given(
        radio_power=st.floats(1.0, 5000.0, allow_nan=False),
        radio_capacity=st.floats(0.5, 1000.0, allow_nan=False),
        cores=st.integers(1, 64),
        core_power=st.floats(0.5, 50.0, allow_nan=False),
        core_capacity=st.floats(0.05, 5.0, allow_nan=False),
        ue_nj=st.floats(0.0, 1000.0, allow_nan=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_dump_then_load_is_identity(self, radio_power, radio_capacity, cores,
                                        core_power, core_capacity, ue_nj):
        catalog = replace(
            default_catalog(),
            radio=EquipmentSpec("radio", radio_power, radio_capacity),
            edge_server=ServerSpec(cores=cores, per_core_power_w=core_power,
                                   per_core_capacity_gbps=core_capacity,
                                   server_capacity_gbps=cores * core_capacity),
            ue_energy_j_per_bit=ue_nj * 1e-9,
        )
        reloaded = load_catalog(dump_catalog(catalog))
        assert reloaded.radio == catalog.radio
        assert reloaded.edge_server == catalog.edge_server
        assert rel_close(reloaded.ue_energy_j_per_bit, catalog.ue_energy_j_per_bit, tol=1e-12)
