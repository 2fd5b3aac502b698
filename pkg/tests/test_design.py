import numpy as np
import pytest

from asymscat.design import DEFAULT_TARGETS, DesignResult, DeviceSpec, design_device, verify_design
from asymscat.errors import AdjointDivergenceError, DesignError, ForbiddenDeviceError, VerificationError
from asymscat.kernels import PolynomialKernel
from asymscat.solver import SolverConfig, hatted_from_unhatted, scatter_all
from asymscat.symmetry import check_symmetries

DEVICES = [
    ("TR/A", "none"),
    ("T/R", "none"),
    ("T/A", "viii"),
    ("TR/R", "viii"),
    ("TR/T", "pt"),
]


@pytest.fixture(scope="module")
def designs():
    out = {}
    for code, constraint in DEVICES:
        spec = DeviceSpec(code=code, constraint=constraint)
        out[code] = design_device(spec, seed=0, restarts=8)
    return out


class TestDeviceSpec:
    def test_default_targets_match_code_pattern(self):
        spec = DeviceSpec(code="TR/A")
        assert spec.targets == (1.0 + 0j, 0j, -1.0 + 0j, 0j)

    def test_rejects_pattern_mismatch(self):
        with pytest.raises(ValueError):
            DeviceSpec(code="TR/A", targets=(1.0, 0.0, 0.5, 0.0))

    def test_viii_requires_equal_reflections(self):
        with pytest.raises(ValueError):
            DeviceSpec(code="TR/R", targets=(1.0, 0.0, -1.0, 1.0), constraint="viii")

    def test_unknown_code(self):
        with pytest.raises(ValueError):
            DeviceSpec(code="X/Y")


class TestDesignDevice:
    @pytest.mark.parametrize("code,constraint", DEVICES)
    def test_targets_reached_at_k0(self, designs, code, constraint):
        result = designs[code]
        assert result.residual < 1e-6
        got = np.array(result.verification.quadruple)
        want = np.array(DEFAULT_TARGETS[code], dtype=complex)
        assert np.max(np.abs(got - want)) < 1e-6

    def test_viii_designs_satisfy_viii(self, designs):
        for code in ("T/A", "TR/R"):
            report = check_symmetries(designs[code].kernel)
            assert report.verdicts["VIII"]

    def test_pt_design_satisfies_vii(self, designs):
        report = check_symmetries(designs["TR/T"].kernel)
        assert report.verdicts["VII"]
        assert not report.verdicts["II"]

    def test_unconstrained_devices_satisfy_nothing(self, designs):
        # the broken-symmetry devices cannot satisfy any nontrivial code
        for code in ("TR/A", "T/R"):
            report = check_symmetries(designs[code].kernel)
            assert report.satisfied() == ("I",)

    @pytest.mark.parametrize("code,constraint", DEVICES)
    def test_edge_vanishing(self, designs, code, constraint):
        kernel = designs[code].kernel
        assert kernel.edge_max() < 1e-9 * kernel.max_abs()

    def test_forbidden_constraint_rejected_upfront(self):
        with pytest.raises(ForbiddenDeviceError, match="VIII"):
            design_device(DeviceSpec(code="TR/A", constraint="viii"))
        with pytest.raises(ForbiddenDeviceError, match="VII"):
            design_device(DeviceSpec(code="T/A", targets=(1.0, 0.0, 0.0, 0.0),
                                     constraint="pt"))

    def test_ra_device_is_classification_only(self):
        with pytest.raises(DesignError):
            design_device(DeviceSpec(code="R/A"))

    def test_deterministic_given_seed(self):
        spec = DeviceSpec(code="TR/A")
        a = design_device(spec, seed=3, restarts=2)
        b = design_device(spec, seed=3, restarts=2)
        np.testing.assert_array_equal(a.kernel.coeffs, b.kernel.coeffs)


class TestAdjointDivergence:
    @pytest.mark.parametrize("code", ["TR/A", "T/R", "T/A"])
    def test_divergence_at_k0(self, designs, code):
        # T^l T^r - R^l R^r -> 0 for these devices: the adjoint problem
        # genuinely diverges at the design momentum
        with pytest.raises(AdjointDivergenceError):
            hatted_from_unhatted(designs[code].verification, tol=1e-4)

    def test_trr_adjoint_is_swapped_device(self, designs):
        hat = hatted_from_unhatted(designs["TR/R"].verification)
        np.testing.assert_allclose(
            np.array(hat), [0.0, -1.0, -1.0, -1.0], atol=1e-6)

    def test_trr_adjoint_solve_matches_swapped_device(self, designs):
        # the same quadruple from an actual H-dagger solve
        amps = scatter_all(designs["TR/R"].kernel, 1.0,
                           SolverConfig(n_grid=801, quadrature="simpson"),
                           include_adjoint=True)
        np.testing.assert_allclose(
            np.array(amps.hatted), [0.0, -1.0, -1.0, -1.0], atol=1e-6)


class TestVerifyDesign:
    def test_one_way_mirror_sweep(self, designs):
        table = verify_design(designs["TR/A"], (0.9, 1.1), n_points=11)
        k = table.column("k")
        rl2 = table.column("abs2_Rl")
        at_k0 = np.argmin(np.abs(k - 1.0))
        assert rl2[at_k0] == pytest.approx(1.0, abs=1e-6)

    def test_viii_design_has_equal_reflections_across_window(self, designs):
        # symmetry-implied, not only at k0
        table = verify_design(designs["T/A"], (0.8, 1.2), n_points=11)
        rl2 = table.column("abs2_Rl")
        rr2 = table.column("abs2_Rr")
        np.testing.assert_allclose(rl2, rr2, atol=1e-10)

    def test_zero_kernel_flat_sweep(self):
        # bare free-space targets: zero kernel, flat sweep
        spec = DeviceSpec(code=None, targets=(1.0, 1.0, 0.0, 0.0))
        kernel = PolynomialKernel(np.zeros((6, 2), dtype=complex))
        amps = scatter_all(kernel, 1.0, SolverConfig(n_grid=201))
        fake = DesignResult(kernel, (np.zeros(6), np.zeros(6)), amps, 0.0, 0.0, spec)
        table = verify_design(fake, (0.8, 1.2), n_points=9)
        np.testing.assert_allclose(table.column("abs2_Tl"), 1.0, atol=1e-12)
        np.testing.assert_allclose(table.column("abs2_Rl"), 0.0, atol=1e-12)

    def test_misses_raise_verification_error(self, designs):
        wrong_spec = DeviceSpec(code="T/R")
        broken = DesignResult(
            designs["TR/A"].kernel, designs["TR/A"].wave_coeffs,
            designs["TR/A"].verification, designs["TR/A"].residual,
            designs["TR/A"].design_residual, wrong_spec)
        with pytest.raises(VerificationError):
            verify_design(broken, (0.9, 1.1), n_points=5)


class TestWaveCoefficients:
    @pytest.mark.parametrize("code,constraint", DEVICES)
    def test_interior_wave_matches_boundary_form(self, designs, code, constraint):
        # the polynomial interior wave must join the exterior plane waves
        # with the target amplitudes, C^1 at both edges
        result = designs[code]
        k0 = result.spec.k0
        Tl, Tr, Rl, Rr = result.spec.targets
        cl, cr = result.wave_coeffs
        poly_l = np.polynomial.polynomial.Polynomial(cl)
        dpoly_l = poly_l.deriv()
        up, dn = np.exp(1j * k0), np.exp(-1j * k0)
        assert poly_l(-1.0) == pytest.approx(dn + Rl * up, abs=1e-9)
        assert dpoly_l(-1.0) == pytest.approx(1j * k0 * (dn - Rl * up), abs=1e-9)
        assert poly_l(1.0) == pytest.approx(Tl * up, abs=1e-9)
        poly_r = np.polynomial.polynomial.Polynomial(cr)
        assert poly_r(1.0) == pytest.approx(dn + Rr * up, abs=1e-9)
        assert poly_r(-1.0) == pytest.approx(Tr * up, abs=1e-9)
