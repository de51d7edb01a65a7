import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nuccr.params import (FLAVORS, MixingMatrix, OscillationParams, build_pmns,
                          default_params, load_config, params_from_dict)

from oracles import phase_constant_from_hbarc


class TestDefaultParams:
    def test_splittings(self):
        p = default_params()
        assert p.dm2_21 == 7.50e-5
        assert p.dm2_31 == 2.46e-3
        assert p.dm2_32 == 2.38e-3

    def test_angles_in_radians(self):
        p = default_params()
        assert p.theta12 == math.radians(33.48)
        assert abs(p.theta12 - 0.58434) < 1e-5
        assert p.theta13 == math.radians(8.50)
        assert p.theta23 == math.radians(42.3)

    def test_cp_phase_zero(self):
        assert default_params().delta_cp == 0.0

    def test_splitting_consistency_within_tolerance(self):
        p = default_params()
        assert abs(p.dm2_32 - (p.dm2_31 - p.dm2_21)) <= 1e-5

    def test_inconsistent_splittings_rejected(self):
        with pytest.raises(ValueError, match="inconsistent"):
            OscillationParams(0.5, 0.1, 0.7, 0.0, 7.5e-5, 2.46e-3, 2.5e-3)

    def test_non_finite_angle_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            OscillationParams(math.nan, 0.1, 0.7, 0.0, 7.5e-5, 2.46e-3, 2.385e-3)


class TestBuildPmns:
    def test_zero_angles_give_identity(self):
        p = OscillationParams(0, 0, 0, 0, 7.5e-5, 2.46e-3, 2.385e-3)
        assert np.array_equal(build_pmns(p).u, np.eye(3))

    def test_e1_entry(self):
        u = build_pmns(default_params()).u
        expected = math.cos(math.radians(33.48)) * math.cos(math.radians(8.50))
        assert abs(abs(u[0, 0]) - expected) < 1e-15
        assert abs(abs(u[0, 0]) - 0.8249) < 5e-5

    def test_unitary(self):
        u = build_pmns(default_params()).u
        assert np.abs(u @ u.conj().T - np.eye(3)).max() <= 1e-12

    def test_zero_delta_gives_real_entries(self):
        u = build_pmns(default_params()).u
        assert np.array_equal(u.imag, np.zeros((3, 3)))

    def test_nonzero_delta_entry_13(self):
        p = OscillationParams(0.5, 0.2, 0.7, 1.1, 7.5e-5, 2.46e-3, 2.385e-3)
        u = build_pmns(p).u
        expected = math.sin(0.2) * np.exp(-1j * 1.1)
        assert abs(u[0, 2] - expected) < 1e-15

    @given(theta12=st.floats(0, math.pi / 2), theta13=st.floats(0, math.pi / 2),
           theta23=st.floats(0, math.pi / 2),
           delta=st.floats(0, 2 * math.pi, exclude_max=True))
    def test_unitarity_property(self, theta12, theta13, theta23, delta):
        p = OscillationParams(theta12, theta13, theta23, delta,
                              7.5e-5, 2.46e-3, 2.385e-3)
        u = build_pmns(p).u
        assert np.abs(u @ u.conj().T - np.eye(3)).max() <= 1e-12
        for row in range(3):
            assert abs((np.abs(u[row]) ** 2).sum() - 1.0) <= 1e-12
        for col in range(3):
            assert abs((np.abs(u[:, col]) ** 2).sum() - 1.0) <= 1e-12

    def test_non_unitary_matrix_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            MixingMatrix(np.eye(3) * 1.1)


class TestPhaseConstantDerivation:
    def test_matches_hbarc_oracle(self):
        from nuccr.units import PHASE_CONST
        assert abs(PHASE_CONST - phase_constant_from_hbarc()) < 1e-12
        assert abs(PHASE_CONST - 2.5338) < 1e-4


class TestConfig:
    CFG = {
        "theta12_deg": 33.48, "theta13_deg": 8.50, "theta23_deg": 42.3,
        "delta_cp_deg": 0.0, "dm2_21_ev2": 7.5e-5, "dm2_31_ev2": 2.46e-3,
        "dm2_32_ev2": 2.38e-3,
    }

    def test_degrees_converted(self):
        p = params_from_dict(self.CFG)
        assert p.theta12 == math.radians(33.48)
        assert p.dm2_32 == 2.38e-3

    def test_dm2_32_derived_when_absent(self):
        cfg = {k: v for k, v in self.CFG.items() if k != "dm2_32_ev2"}
        p = params_from_dict(cfg)
        assert p.dm2_32 == pytest.approx(2.385e-3, abs=1e-18)

    def test_missing_key_rejected(self):
        cfg = {k: v for k, v in self.CFG.items() if k != "theta13_deg"}
        with pytest.raises(ValueError, match="theta13_deg"):
            params_from_dict(cfg)

    def test_load_roundtrip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(self.CFG))
        p = params_from_dict(load_config(path))
        assert p == params_from_dict(self.CFG)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValueError, match="malformed"):
            load_config(path)

    def test_flavor_tuple(self):
        assert FLAVORS == ("e", "mu", "tau")
