import numpy as np
import pytest

from fwflow.tableau import (
    Tableau,
    builtin,
    builtin_names,
    certificate,
    certificate_decay,
    rate_constants,
    validate,
)


class TestValidate:
    def test_builtins_are_valid(self):
        for name in builtin_names():
            validate(builtin(name))

    def test_beta_sum(self):
        t = Tableau(A=[[0.0, 0.0], [0.5, 0.0]], beta=[0.0, 0.5], omega=[0.0, 0.5])
        with pytest.raises(ValueError, match="beta sum"):
            validate(t)

    def test_strictly_lower_triangular(self):
        A = builtin("rk4").A.copy()
        A[0, 1] = 1.0
        t = Tableau(A=A, beta=builtin("rk4").beta, omega=builtin("rk4").omega)
        with pytest.raises(ValueError, match="strictly lower triangular"):
            validate(t)

    def test_omega_first_entry(self):
        t = Tableau(A=[[0.0, 0.0], [0.5, 0.0]], beta=[0.0, 1.0], omega=[0.1, 0.5])
        with pytest.raises(ValueError, match="omega"):
            validate(t)


class TestBuiltins:
    def test_midpoint_values(self):
        t = builtin("midpoint")
        np.testing.assert_allclose(t.A, [[0.0, 0.0], [0.5, 0.0]])
        np.testing.assert_allclose(t.beta, [0.0, 1.0])
        np.testing.assert_allclose(t.omega, [0.0, 0.5])

    def test_rk38_beta(self):
        np.testing.assert_allclose(builtin("rk38").beta, [1 / 8, 3 / 8, 3 / 8, 1 / 8])

    def test_euler_is_single_stage(self):
        t = builtin("euler")
        assert t.q == 1
        assert t.A[0, 0] == 0.0 and t.beta[0] == 1.0 and t.omega[0] == 0.0

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            builtin("heun")

    def test_json_round_trip(self):
        t = builtin("rk4")
        t2 = Tableau.from_json(t.to_json(), name="rk4")
        np.testing.assert_array_equal(t.A, t2.A)
        np.testing.assert_array_equal(t.beta, t2.beta)
        np.testing.assert_array_equal(t.omega, t2.omega)


class TestCertificate:
    def test_euler_closed_form(self):
        for c in (1.0, 2.0, 5.0):
            for k in (1, 3, 10, 100):
                z = certificate(builtin("euler"), c, k).z
                assert z[0] == pytest.approx(c / (c + k), abs=1e-15)

    def test_midpoint_k1(self):
        cert = certificate(builtin("midpoint"), 2.0, 1)
        np.testing.assert_allclose(cert.z, [-0.3810, 1.1429], atol=5e-4)
        assert not cert.in_unit_interval

    def test_midpoint_k2(self):
        cert = certificate(builtin("midpoint"), 2.0, 2)
        np.testing.assert_allclose(cert.z, [-0.2222, 0.8889], atol=5e-4)

    def test_rk4_k1(self):
        cert = certificate(builtin("rk4"), 2.0, 1)
        np.testing.assert_allclose(cert.z, [0.2449, 0.5986, 0.5714, 0.3333], atol=5e-4)
        assert cert.in_unit_interval

    def test_requires_k_at_least_one(self):
        with pytest.raises(ValueError):
            certificate(builtin("rk4"), 2.0, 0)

    def test_decay_values(self):
        d = certificate_decay(builtin("midpoint"), 2.0, 2)
        np.testing.assert_allclose(d, [1.1429, 0.8889], atol=5e-4)
        assert d[1] < d[0]

    def test_decay_non_increasing_all_builtins(self):
        for name in builtin_names():
            d = certificate_decay(builtin(name), 2.0, 50)
            assert np.all(np.diff(d) <= 1e-12)


class TestRateConstants:
    def test_euler_hand_values(self):
        rc = rate_constants(builtin("euler"), c=2.0, L=1.0, diam=2.0, h_x0=0.0)
        assert rc.p_max == pytest.approx(2 / 3)
        assert rc.D2 == pytest.approx(4 / 3)
        assert rc.D3 == pytest.approx(0.0)
        assert rc.D4 == pytest.approx(8 / 9)
        assert rc.h0 == pytest.approx(32 / 9)

    def test_degenerate_diameter(self):
        rc = rate_constants(builtin("rk4"), c=2.0, L=1.0, diam=0.0)
        assert rc.D2 == rc.D3 == rc.D4 == 0.0

    def test_midpoint_against_direct_inverse(self):
        t = builtin("midpoint")
        c = 2.0
        gam = c / (c + 1 + t.omega)
        M = np.eye(2) + t.A.T @ np.diag(gam)
        P = np.diag(gam) @ np.linalg.inv(M)
        p_max = np.linalg.norm(P, axis=0).max()
        rc = rate_constants(t, c=c, L=1.0, diam=2.0)
        assert rc.p_max == pytest.approx(p_max)
        assert rc.D2 > 0 and rc.D3 > 0 and rc.D4 > 0

    def test_d4_lower_bound(self):
        for name in builtin_names():
            rc = rate_constants(builtin(name), c=2.0, L=1.0, diam=2.0)
            assert rc.D4 >= rc.L * rc.D2**2 / 2 - 1e-12

    def test_requires_c_above_one(self):
        with pytest.raises(ValueError):
            rate_constants(builtin("euler"), c=1.0, L=1.0, diam=2.0)

    def test_bound_curve(self):
        rc = rate_constants(builtin("euler"), c=2.0, L=1.0, diam=2.0, h_x0=10.0)
        assert rc.h0 == 10.0
        assert rc.bound(4) == pytest.approx(2.0)
