import json
import math

import pytest

from brightbeam.errors import ScenarioError
from brightbeam.harness import fixtures_dir
from brightbeam.scenario import (
    Scenario,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)


def test_defaults():
    s = Scenario()
    assert s.method == "A"
    assert s.gain == 1.0
    assert s.entangle_ratio == 0.5
    assert s.theta == pytest.approx(math.pi / 2)
    assert s.phi == pytest.approx(math.pi / 2)
    assert s.input_a.amplitude == 100.0
    assert s.input_a.squeezing_db == 0.0
    assert s.budget_a.effective() == 1.0
    assert s.excess_correlation == 1.0


def test_empty_dict_gives_defaults():
    assert scenario_from_dict({}) == Scenario()


def test_dotted_keys_reach_nested_records():
    s = scenario_from_dict({
        "method": "B",
        "input_a.squeezing_db": 3.7,
        "input_a.antisqueezing_db": 5.0,
        "budget_a.prop_loss": 0.1,
        "budget_b.quantum_efficiency": 0.9,
    })
    assert s.input_a.squeezing_db == 3.7
    assert s.input_b.squeezing_db == 0.0
    assert s.budget_a.propagation == pytest.approx(0.9)
    assert s.budget_b.quantum_efficiency == 0.9


def test_unknown_key_named_in_error():
    with pytest.raises(ScenarioError, match="input_a.squeeze_db"):
        scenario_from_dict({"input_a.squeeze_db": 3.0})


def test_out_of_range_ratio_names_field():
    with pytest.raises(ScenarioError, match="entangle_ratio"):
        scenario_from_dict({"entangle_ratio": 1.2})


def test_bad_gain_rejected():
    with pytest.raises(ScenarioError, match="gain"):
        Scenario(gain="best")
    with pytest.raises(ScenarioError, match="gain"):
        Scenario(gain=-2.0)
    assert Scenario(gain="optimize").gain == "optimize"


def test_bad_port_and_method():
    with pytest.raises(ScenarioError, match="port"):
        Scenario(port="e")
    with pytest.raises(ScenarioError, match="method"):
        Scenario(method="D")


def test_nested_validation_reported_as_scenario_error():
    # Heisenberg-violating input must surface as a config error, not a
    # bare ValueError
    with pytest.raises(ScenarioError, match="input_a"):
        scenario_from_dict({"input_a.squeezing_db": 6.0, "input_a.antisqueezing_db": 1.0})


def test_dict_roundtrip():
    s = scenario_from_dict({
        "method": "C",
        "port": "d",
        "theta": 1.2,
        "phi": 0.8,
        "gain": "optimize",
        "imbalance": 0.04,
        "excess_correlation": 0.93,
        "input_b.excess_phase_db": 23.0,
        "budget_a.visibility": 0.95,
        "label": "roundtrip",
        "frequency_mhz": 17.5,
    })
    assert scenario_from_dict(scenario_to_dict(s)) == s


def test_file_roundtrip(tmp_path):
    s = Scenario(method="B", theta=0.7, label="disk")
    path = tmp_path / "scenario.json"
    save_scenario(s, path)
    assert load_scenario(path) == s


def test_load_rejects_non_object(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2, 3]\n")
    with pytest.raises(ScenarioError, match="JSON object"):
        load_scenario(path)
    path.write_text("{not json")
    with pytest.raises(ScenarioError, match="valid JSON"):
        load_scenario(path)
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(tmp_path / "missing.json")


def test_bundled_fixture_files_load():
    paths = sorted(fixtures_dir().glob("*.json"))
    assert len(paths) == 4
    for p in paths:
        s = load_scenario(p)
        assert s.label
        assert s.frequency_mhz is not None
        with open(p, encoding="utf-8") as fh:
            raw = json.load(fh)
        assert raw["method"] == s.method
