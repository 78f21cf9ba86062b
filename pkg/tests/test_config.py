import json

import pytest
from hypothesis import given, strategies as st

from cascadent.config import config_from_dict, config_to_dict, dump_config, load_config
from cascadent.model import ChainConfig, ConfigError, hz

rates = st.floats(1e-3, 1e9)


def cavity(**kw):
    base = {"kappa_a_hz": 4e5, "kappa_b_hz": 4e5, "g_a_hz": 1e4, "g_b_hz": 1.5e4,
            "gamma_m_hz": 100.0}
    base.update(kw)
    return base


def test_defaults_and_units():
    cfg = config_from_dict({"chain": [cavity()]})
    c = cfg.cavities[0]
    assert c.kappa_a == hz(4e5) and c.g_b == hz(1.5e4)
    assert (c.n_th, c.eta_a, c.eta_b) == (0.0, 1.0, 1.0)
    assert cfg.omega_m is None


@given(st.lists(st.tuples(rates, rates, rates, rates, rates, st.floats(0, 1e3),
                          st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=4),
       rates)
def test_serialize_parse_round_trip(values, om):
    chain = [dict(zip(["kappa_a_hz", "kappa_b_hz", "g_a_hz", "g_b_hz", "gamma_m_hz",
                       "n_th", "eta_a", "eta_b"], v)) for v in values]
    cfg = config_from_dict({"chain": chain, "omega_m_hz": om})
    again = config_from_dict(json.loads(json.dumps(config_to_dict(cfg))))
    for c1, c2 in zip(cfg.cavities, again.cavities):
        for f in ("kappa_a", "kappa_b", "g_a", "g_b", "gamma_m", "n_th", "eta_a", "eta_b"):
            assert getattr(c2, f) == pytest.approx(getattr(c1, f), rel=1e-12, abs=0)
    assert again.omega_m == pytest.approx(cfg.omega_m, rel=1e-12)


def test_file_round_trip(tmp_path):
    cfg = ChainConfig.matched(3, hz(1e3), hz(1.5e3), hz(2e5), gamma_m=hz(10), eta=0.5)
    dump_config(cfg, tmp_path / "c.json")
    back = load_config(tmp_path / "c.json")
    for a, b in zip(cfg.cavities, back.cavities):
        assert b.kappa_a == pytest.approx(a.kappa_a, rel=1e-12)
        assert b.eta_b == a.eta_b


@pytest.mark.parametrize("data, fragment", [
    ({"chain": [cavity()], "extra": 1}, "unknown top-level"),
    ({"chain": [cavity(foo=1)]}, "unknown keys"),
    ({"chain": []}, "non-empty"),
    ({}, "missing 'chain'"),
    ({"chain": [cavity(kappa_a_hz="fast")]}, "must be a number"),
    ({"chain": [{k: v for k, v in cavity().items() if k != "gamma_m_hz"}]}, "missing gamma_m_hz"),
    ({"chain": [cavity(pump_a={"power_w": 1e-3})]}, "exactly one"),
    ({"chain": [cavity(), cavity()], "omega_m_hz": [1e7]}, "length"),
])
def test_schema_errors(data, fragment):
    with pytest.raises(ConfigError, match=fragment):
        config_from_dict(data)


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(p)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def _pump_block(**kw):
    block = {"power_w": 1e-3, "kappa_in_hz": 1e4, "nu_hz": 2.8e14, "omega_cav_hz": 2.8e14,
             "length_m": 1e-3, "mass_kg": 1e-10}
    block.update(kw)
    return block


def test_pump_derived_coupling():
    from cascadent.model import PumpParams, effective_coupling
    entry = cavity(pump_a=_pump_block(delta_hz=-1e7), pump_b=_pump_block(delta_hz=1e7))
    del entry["g_a_hz"], entry["g_b_hz"]
    cfg = config_from_dict({"chain": [entry], "omega_m_hz": 1e7})
    c = cfg.cavities[0]
    assert c.g_a > 0 and c.g_b > 0
    # a single pump alone would see only its own radiation pressure
    single = effective_coupling(PumpParams(1e-3, hz(1e4), hz(2.8e14), hz(2.8e14), 1e-3, 1e-10,
                                           hz(1e7), hz(100), hz(4e5), delta=-hz(1e7)))
    assert c.g_a == pytest.approx(single.coupling, rel=1e-3)


def test_pump_requires_mechanical_frequency():
    entry = cavity(pump_a=_pump_block())
    del entry["g_a_hz"]
    with pytest.raises(ConfigError, match="omega_m_hz"):
        config_from_dict({"chain": [entry]})
