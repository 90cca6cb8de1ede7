import numpy as np
import pytest

from revplast.mean_field import PhaseSpec, assemble_operators
from revplast.results import write_macro_csv, write_phase_csv, write_plot_data
from revplast.solver import drive, strain_program
from revplast.tensors import SQRT2


@pytest.fixture(scope="module")
def elastic_ops():
    return assemble_operators([PhaseSpec("matrix", 1.0, 100.0, 0.25)])


def run_one_step(ops, target):
    return drive(ops, strain_program([(np.asarray(target), 1)]))


def test_one_step_elastic_file(elastic_ops, tmp_path):
    target = np.array([1e-3, 0, 0, 0, 0, 2e-4])
    states = run_one_step(elastic_ops, target)
    path = tmp_path / "macro.csv"
    write_macro_csv(states, str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 3  # header + initial + one increment
    header = lines[0].split(",")
    assert header[0] == "step"
    assert header[1:7] == ["eps_11", "eps_22", "eps_33", "eps_23", "eps_13", "eps_12"]
    row = lines[2].split(",")
    sig = elastic_ops.stiffness_hom @ states[1].macro_strain
    # stress columns match the homogenized law; shears are unscaled on output
    assert float(row[7]) == pytest.approx(sig[0], abs=1e-18)
    assert float(row[12]) == pytest.approx(sig[5] / SQRT2, abs=1e-18)
    assert float(row[6]) == pytest.approx(2e-4 / SQRT2, abs=1e-20)


def test_rows_match_increments(elastic_ops, tmp_path):
    program = strain_program([(np.array([1e-4, 0, 0, 0, 0, 0]), 3),
                              (np.array([0, 0, 0, 0, 0, 0]), 2)])
    states = drive(elastic_ops, program)
    path = tmp_path / "macro.csv"
    write_macro_csv(states, str(path))
    assert len(path.read_text().splitlines()) == 1 + 5 + 1
    first = path.read_text().splitlines()[1].split(",")
    assert first[0] == "0"
    assert all(float(x) == 0.0 for x in first[1:-1])


def test_byte_identical_rewrites(elastic_ops, tmp_path):
    states = run_one_step(elastic_ops, [1e-3, -2e-4, 0, 0, 1e-5, 0])
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_macro_csv(states, str(p1))
    write_macro_csv(states, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_phase_file_layout(elastic_ops, tmp_path):
    states = run_one_step(elastic_ops, [1e-3, 0, 0, 0, 0, 0])
    path = tmp_path / "phases.csv"
    write_phase_csv(states, ["matrix"], str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 2 * 1
    assert lines[1].split(",")[1] == "matrix"
    assert lines[1].split(",")[-1] == "0"


def test_plot_data_axes(elastic_ops, tmp_path):
    states = run_one_step(elastic_ops, [2e-4, 0, -1e-3, 0, 0, 0])
    paths = write_plot_data(states, str(tmp_path / "fig"))
    axial = (tmp_path / "fig_axial.csv").read_text().splitlines()
    lateral = (tmp_path / "fig_lateral.csv").read_text().splitlines()
    assert paths[0].endswith("fig_axial.csv")
    assert axial[0] == "eps_33,abs_sig_33"
    e33, s33 = (float(x) for x in axial[-1].split(","))
    assert e33 == -1e-3
    assert s33 == pytest.approx(abs(states[-1].macro_stress[2]), abs=1e-18)
    e11, s33b = (float(x) for x in lateral[-1].split(","))
    assert e11 == 2e-4
    assert s33b == s33
