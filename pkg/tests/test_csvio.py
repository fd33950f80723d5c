import numpy as np
import pytest

from nml import csvio, diagnostics as dg, volterra
from nml.errors import ParameterError
from nml.volterra import SolverConfig


@pytest.fixture()
def sample_trajectory():
    return volterra.closed_form_trajectory(1.0, 0.1, SolverConfig(dt=0.1, t_max=12.0))


class TestFormat:
    def test_twelve_significant_digits(self):
        assert csvio.fmt(1.0) == "1"
        assert csvio.fmt(0.1) == "0.1"
        assert csvio.fmt(1.0 / 3.0) == "0.333333333333"
        assert csvio.fmt(1e-6) == "1e-06"
        assert csvio.fmt(float("nan")) == "nan"

    def test_header_layout(self, tmp_path, sample_trajectory):
        path = tmp_path / "t.csv"
        csvio.write_trajectory_csv(path, sample_trajectory)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# nml-trajectory method=closed-form")
        assert lines[1] == "t,re_c,im_c,population,gamma_t,s_t"
        assert lines[2] == "0,1,0,1,,"
        assert len(lines) == 2 + 121


class TestRoundTrip:
    def test_read_back(self, tmp_path, sample_trajectory):
        path = tmp_path / "t.csv"
        csvio.write_trajectory_csv(path, sample_trajectory)
        back = csvio.read_trajectory_csv(path)
        assert back.method_tag == "closed-form"
        assert back.params == sample_trajectory.params
        assert back.c_dot is None
        # values agree at the 12-digit storage precision
        assert np.max(np.abs(back.c - sample_trajectory.c)) < 1e-11
        assert np.max(np.abs(back.population
                             - sample_trajectory.population)) < 1e-11

    def test_rewrite_is_byte_stable(self, tmp_path, sample_trajectory):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        csvio.write_trajectory_csv(a, sample_trajectory)
        back = csvio.read_trajectory_csv(a)
        csvio.write_trajectory_csv(b, back)
        assert a.read_bytes() == b.read_bytes()

    def test_diagnostic_columns(self, tmp_path, sample_trajectory):
        coeffs = dg.master_coefficients(sample_trajectory)
        path = tmp_path / "t.csv"
        csvio.write_trajectory_csv(path, sample_trajectory, coeffs=coeffs)
        lines = path.read_text().splitlines()
        row = lines[5].split(",")
        assert row[4] != "" and row[5] == "0"

    def test_header_mismatch_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ParameterError):
            csvio.read_trajectory_csv(bad)

    def test_empty_file_rejected(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("t,re_c,im_c,population,gamma_t,s_t\n")
        with pytest.raises(ParameterError):
            csvio.read_trajectory_csv(bad)
