"""Bundled scenarios end to end; slow, deselect with -m 'not slow'."""
import math
import os

import numpy as np
import pytest

from prft.use_cases.scenario import RunScenarioUseCase

pytestmark = pytest.mark.slow


def run(unit_of_work, scenario, tmp_path, name=None):
    return RunScenarioUseCase(unit_of_work).execute(scenario, out=str(tmp_path / (name or scenario)))


def table_rows(unit_of_work, result, name):
    table = unit_of_work.results.read_table(os.path.join(result["output_dir"], name))
    return [dict(zip(table["header"], row)) for row in table["rows"]]


def test_rabi_cumulants_agree_with_the_oracle(unit_of_work, tmp_path):
    result = run(unit_of_work, "fig2a", tmp_path)
    assert "oracle kappa_1 agreement [up mode 0]" in result["invariants"]
    assert all(check["ok"] for check in result["invariants"].values())
    entry = result["summary"]["oracle_compare"]["up/mode0"]
    assert entry["spin_deviation"] < 0.05


def test_rabi_quasiprobabilities_turn_negative(unit_of_work, tmp_path):
    low = run(unit_of_work, "fig2b_low", tmp_path)
    high = run(unit_of_work, "fig2b_high", tmp_path)
    for result in (low, high):
        assert "oracle kappa_2 agreement [up mode 0]" in result["invariants"]
        assert all(check["ok"] for check in result["invariants"].values())
        assert max(result["summary"]["redistribute"]["up/mode0"]["l1_distance"]) < 0.02

    low_q = low["summary"]["quasiprob"]["up/mode0"]
    high_q = high["summary"]["quasiprob"]["up/mode0"]
    # the resonant drive is deeper in the non-classical regime at 1.2 periods
    assert low_q["min_quasiprobability_final"] < high_q["min_quasiprobability_final"] < 0.0
    assert low_q["negative_weight_final"] > 0.0
    assert high_q["negative_weight_final"] > 0.0


def test_two_mode_floquet_fluxes(unit_of_work, tmp_path):
    result = run(unit_of_work, "fig3", tmp_path)
    assert all(check["ok"] for check in result["invariants"].values())

    mode = result["summary"]["floquet"]["modes"]["0"]
    shift = 0.4 * math.sqrt(2.0) - 0.5
    assert mode["quasienergies"] == pytest.approx([-shift, shift], abs=1e-6)
    assert mode["first_derivatives"] == pytest.approx([-0.2 * math.sqrt(2.0), 0.2 * math.sqrt(2.0)], abs=1e-5)

    asymptotic = mode["asymptotic"]
    assert asymptotic["floquet 0"]["predicted_flux"] == pytest.approx(0.2 * math.sqrt(2.0), abs=1e-5)
    assert asymptotic["superposition"]["predicted_flux"] == pytest.approx(0.0, abs=1e-6)
    assert asymptotic["superposition"]["variance_change_final"] == pytest.approx(
        (0.2 * math.sqrt(2.0) * 1200.0) ** 2, rel=1e-4
    )

    # long-time transfer between the modes
    cumulants = result["summary"]["cumulants"]
    transfer = 0.2 * math.sqrt(2.0) * 1200.0
    assert cumulants["floquet 0/mode0"]["kappa_1_final"] == pytest.approx(transfer, rel=0.01)
    assert cumulants["floquet 1/mode0"]["kappa_1_final"] == pytest.approx(-transfer, rel=0.01)
    for label in ("floquet 0", "floquet 1"):
        assert abs(cumulants[f"{label}/mode0"]["kappa_2_final"]) < 1.0
    assert abs(cumulants["superposition/mode0"]["kappa_1_final"]) < 2.0

    compare = result["summary"]["oracle_compare"]
    for label in ("floquet 0", "floquet 1"):
        assert compare[f"{label}/mode0"]["kappa_1_deviation"] <= 0.02 * transfer
    superposition = compare["superposition/mode0"]
    assert superposition["kappa_2_deviation"] <= superposition["kappa_2_tolerance"]


def test_floquet_states_stay_pure(unit_of_work, tmp_path):
    result = run(unit_of_work, "fig4a", tmp_path)
    assert all(check["ok"] for check in result["invariants"].values())
    rows = table_rows(unit_of_work, result, "purity.csv")
    assert {row["initial"] for row in rows} == {"floquet 0", "floquet 1"}
    assert min(row["purity_oracle"] for row in rows) >= 0.99
    assert min(row["purity_prft"] for row in rows) == pytest.approx(1.0, abs=1e-9)


def test_superposition_purity_follows_the_prediction(unit_of_work, tmp_path):
    result = run(unit_of_work, "fig4b", tmp_path)
    assert all(check["ok"] for check in result["invariants"].values())
    purity = result["summary"]["purity"]
    for label in ("sigma2 = 100", "sigma2 = 400"):
        assert purity[label]["max_deviation"] <= 0.05


@pytest.mark.parametrize("coupling", [0.05, 0.1, 0.2])
@pytest.mark.parametrize("frequency", [0.9, 1.0, 1.1])
def test_photon_redistribution_matches_the_oracle_over_the_grid(
    unit_of_work, write_scenario, tmp_path, coupling, frequency
):
    document = unit_of_work.scenarios.get("fig7_grid").data
    for mode in document["model"]["modes"]:
        mode["frequency"] = frequency
    document["model"]["modes"][1]["coupling"] = coupling
    result = run(unit_of_work, write_scenario(document), tmp_path, name="fig7")

    assert all(check["ok"] for check in result["invariants"].values())
    distances = result["summary"]["redistribute"]["up/mode0"]["l1_distance"]
    assert np.all(np.asarray(distances[1:]) < 0.02)


def test_three_mode_rabi_transfer(unit_of_work, tmp_path):
    result = run(unit_of_work, "fig5", tmp_path)
    invariants = result["invariants"]
    assert all(check["ok"] for check in invariants.values())
    for label in ("floquet 0", "superposition", "floquet 1"):
        current = invariants[f"energy-current identity [{label}]"]
        assert current["value"] is not None

    cumulants = result["summary"]["cumulants"]
    floquet = [cumulants[f"floquet {index}/mode2"] for index in (0, 1)]
    for entry in floquet:
        assert abs(entry["kappa_2_final"]) < 0.05 * entry["kappa_1_final"] ** 2
    assert floquet[0]["kappa_1_final"] * floquet[1]["kappa_1_final"] < 0.0
    superposition = cumulants["superposition/mode2"]
    assert abs(superposition["kappa_1_final"]) < 0.2 * min(abs(entry["kappa_1_final"]) for entry in floquet)

    # branch separation grows the variance quadratically in time
    rows = [row for row in table_rows(unit_of_work, result, "cumulants.csv") if row["initial"] == "superposition"]

    def kappa2_at(t):
        return min(rows, key=lambda row: abs(row["t"] - t))["kappa_2"]

    assert 3.0 < kappa2_at(100.0) / kappa2_at(50.0) < 5.0
