import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lieburgers import stability as St
from lieburgers.schemes import SchemeId

SCHEMES = list(SchemeId)


class TestConditions:
    def test_ftcs_pass(self):
        r = St.check_conditions("ftcs", (0.5, 0.25))
        assert r.stable and [c.value for c in r.conditions] == [0.25, 0.5, -0.25]

    def test_ftcs_fails_on_diffusion_number(self):
        r = St.check_conditions("ftcs", (0.5, 0.6))
        assert not r.stable and not r.conditions[0].passed

    def test_semi_example(self):
        r = St.check_conditions("semi", (0.5, 0.25), 0.125)
        assert r.stable
        assert r.conditions[0].value == pytest.approx(-0.5)
        assert r.conditions[1].value == pytest.approx(1 / 3)

    def test_lax_wendroff_uses_combined_number(self):
        r = St.check_conditions("lw", (0.6, 0.3))
        assert r.s_star == pytest.approx(0.48) and r.stable
        assert not St.check_conditions("lw", (0.6, 0.35)).stable

    def test_crank_nicolson_unconditional(self):
        assert St.check_conditions("cn", (50.0, 50.0)).stable

    def test_verdict_is_conjunction(self):
        for c in np.linspace(0.05, 1.2, 7):
            for s in np.linspace(0.02, 0.8, 7):
                r = St.check_conditions("semi", (c, s), 0.01)
                assert r.stable == all(k.passed for k in r.conditions)

    def test_report_text(self):
        text = str(St.check_conditions("ftcs", (0.5, 0.6)))
        assert "VIOLATED" in text and "unstable" in text


class TestSymbols:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_constant_mode_preserved(self, scheme):
        assert St.amplification_factor(scheme, (0.7, 0.3), 0.0, 0.02) == pytest.approx(1.0)

    def test_crank_nicolson_pure_diffusion(self):
        theta = np.linspace(0, 2 * np.pi, 101)
        for s in (0.1, 1.0, 10.0):
            q = np.sin(theta / 2) ** 2
            want = np.abs(1 - 2 * s * q) / (1 + 2 * s * q)
            assert np.allclose(St.amplification_factor("cn", (0.0, s), theta), want)
            assert np.all(want <= 1)

    def test_ftcs_edge_case_against_mode_oracle(self):
        g, _ = St.mode_amplification("ftcs", (1.0, 0.5), 32)
        assert g == pytest.approx(St.symbol("ftcs", (1.0, 0.5), np.pi), abs=1e-12)
        assert abs(g) == pytest.approx(1.0)

    @pytest.mark.parametrize("scheme", SCHEMES)
    @given(cfl=st.floats(0.0, 1.5), s=st.floats(0.0, 1.0), om=st.floats(0.0, 0.1),
           k=st.integers(0, 63))
    @settings(max_examples=30, deadline=None)
    def test_symbol_matches_mode_propagation(self, scheme, cfl, s, om, k):
        g, spread = St.mode_amplification(scheme, (cfl, s), k, omega_tau=om)
        assert spread < 1e-10
        assert abs(g - St.symbol(scheme, (cfl, s), 2 * np.pi * k / 64, om)) < 1e-10

    @pytest.mark.parametrize("scheme", SCHEMES)
    @given(cfl=st.floats(0.0, 1.5), s=st.floats(0.0, 1.0), theta=st.floats(0, 2 * np.pi))
    @settings(max_examples=30, deadline=None)
    def test_reflection_symmetry(self, scheme, cfl, s, theta):
        a = St.amplification_factor(scheme, (cfl, s), theta, 0.01)
        b = St.amplification_factor(scheme, (cfl, s), 2 * np.pi - theta, 0.01)
        assert a == pytest.approx(b, abs=1e-12)


class TestScan:
    cfl = np.linspace(0.05, 1.2, 20)
    s = np.linspace(0.02, 0.8, 20)

    def test_crank_nicolson_everywhere(self):
        assert St.scan_stability("cn", self.cfl, self.s).empirical.all()

    def test_ftcs_conditions_are_necessary(self):
        assert St.scan_stability("ftcs", self.cfl, self.s).predicted_contained()

    def test_lax_wendroff_conditions_are_necessary(self):
        scan = St.scan_stability("lw", self.cfl, self.s)
        assert scan.predicted_contained()
        assert scan.mismatch.any()

    @pytest.mark.parametrize("om", [0.0, 0.005, 0.01])
    def test_semi_within_one_cell(self, om):
        assert St.scan_stability("semi", self.cfl, self.s, om).agrees_within_one_cell()

    def test_cancel_rule_value(self):
        assert St.omega_tau_value("cancel", 0.4, 0.1) == pytest.approx(0.08)
        assert St.omega_tau_value(lambda c, s: c + s, 0.4, 0.1) == pytest.approx(0.5)

    def test_needs_twenty_samples(self):
        with pytest.raises(ValueError):
            St.scan_stability("ftcs", self.cfl[:5], self.s)

    def test_render_shape(self):
        text = St.scan_stability("ftcs", self.cfl, self.s).render()
        assert len(text.splitlines()) == 20 and set(text) <= set("#.EP\n")
