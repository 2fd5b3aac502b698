"""Klein-group symmetry tests and asymmetric-device classification.

A kernel may commute with 1, parity, time reversal, or their product, or
be pseudo-hermitian under any of them; that gives eight involutive
relations I..VIII on the kernel.  Satisfied relations imply equalities
among scattering amplitudes, which in turn forbid or allow each of the
six extreme asymmetric device types.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import (
    SYMMETRY_CODES,
    PolynomialKernel,
    RegularizedInverseSquare,
    SampledKernel,
    transform,
)
from .solver import ScatteringAmplitudes

DEVICE_CODES = ("TR/A", "T/R", "T/A", "TR/R", "R/A", "TR/T")

# Symmetries that rule a device out: one satisfied member forbids it.
FORBIDDING_SYMMETRIES = {
    "TR/A": frozenset({"II", "III", "IV", "V", "VI", "VII", "VIII"}),
    "T/R": frozenset({"II", "III", "IV", "V", "VI", "VII", "VIII"}),
    "T/A": frozenset({"II", "III", "IV", "V", "VI", "VII"}),
    "TR/R": frozenset({"II", "III", "VI", "VII"}),
    "R/A": frozenset({"II", "III", "IV", "V", "VII", "VIII"}),
    "TR/T": frozenset({"II", "III", "V", "VIII"}),
}

# Double-symmetry equivalences: given the first symmetry (key), each pair
# of codes holds or fails together.
EQUIVALENT_PAIRS = {
    "II": (("III", "IV"), ("V", "VI"), ("VII", "VIII")),
    "III": (("II", "IV"), ("V", "VII"), ("VI", "VIII")),
    "IV": (("II", "III"), ("V", "VIII"), ("VI", "VII")),
    "V": (("II", "VI"), ("III", "VII"), ("IV", "VIII")),
    "VI": (("II", "V"), ("III", "VIII"), ("IV", "VII")),
    "VII": (("II", "VIII"), ("III", "V"), ("IV", "VI")),
    "VIII": (("II", "VII"), ("III", "VI"), ("IV", "V")),
}


@dataclass(frozen=True)
class SymmetryReport:
    """Normalized sup-norm residuals and verdicts for codes I..VIII."""

    residuals: dict
    verdicts: dict
    tol: float

    def satisfied(self) -> tuple[str, ...]:
        return tuple(c for c in SYMMETRY_CODES if self.verdicts[c])


def _sampled_residuals(kernel: SampledKernel) -> dict:
    base = np.asarray(kernel.values)
    scale = np.max(np.abs(base))
    residuals = {}
    for code in SYMMETRY_CODES:
        other = np.asarray(kernel.transform(code).values)
        if scale == 0.0:
            residuals[code] = 0.0
        else:
            residuals[code] = float(np.max(np.abs(base - other)) / scale)
    return residuals


def _polynomial_residuals(kernel: PolynomialKernel) -> dict:
    base = kernel._square_coeffs()
    scale = np.max(np.abs(base))
    residuals = {}
    for code in SYMMETRY_CODES:
        other = PolynomialKernel(base, d=kernel.d).transform(code).coeffs
        if scale == 0.0:
            residuals[code] = 0.0
        else:
            residuals[code] = float(np.max(np.abs(base - other)) / scale)
    return residuals


def check_symmetries(kernel, tol: float = 1e-9) -> SymmetryReport:
    """Residual of V - transform(V, code) for each code, sup-norm over
    the stored representation, normalized by the sup-norm of V.

    Polynomial kernels are checked through their coefficient relations
    (e.g. VIII holds iff v_ij = (-1)^{i+j} v_ji); everything else through
    the sampled representation.  Local kernels satisfy VI identically.
    """
    if isinstance(kernel, PolynomialKernel):
        residuals = _polynomial_residuals(kernel)
    elif isinstance(kernel, RegularizedInverseSquare):
        residuals = _sampled_residuals(kernel.to_sampled())
    else:
        residuals = _sampled_residuals(kernel)
    verdicts = {code: residuals[code] < tol for code in SYMMETRY_CODES}
    return SymmetryReport(residuals, verdicts, tol)


def symmetrize(kernel, code: str):
    """Project a kernel onto the class fixed by ``code``:
    (V + transform(V, code)) / 2.  Exact class membership by construction;
    used to generate test kernels of a prescribed symmetry."""
    if code == "I":
        return kernel
    other = transform(kernel, code)
    if isinstance(kernel, SampledKernel):
        if kernel.is_local and not other.is_local:
            raise ValueError(f"symmetry {code} does not preserve locality")
        return SampledKernel(
            kernel.grid, (np.asarray(kernel.values) + np.asarray(other.values)) / 2.0,
            is_local=kernel.is_local,
        )
    if isinstance(kernel, PolynomialKernel):
        a = PolynomialKernel(kernel._square_coeffs(), d=kernel.d)
        b = PolynomialKernel(other._square_coeffs() if other.coeffs.shape != a.coeffs.shape
                             else other.coeffs, d=kernel.d)
        return PolynomialKernel((a.coeffs + b.coeffs) / 2.0, d=kernel.d)
    raise TypeError(f"cannot symmetrize kernel of type {type(kernel).__name__}")


def equivalence_table_check(kernel, first: str, tol: float = 1e-9) -> list:
    """For a kernel satisfying ``first``, report whether each equivalent
    pair of symmetries holds or fails together.

    Returns [(pair, agree)] for the three pairs listed under ``first``.
    Raises ValueError when the kernel does not satisfy ``first``.
    """
    if first not in EQUIVALENT_PAIRS:
        raise ValueError(f"first symmetry must be one of {tuple(EQUIVALENT_PAIRS)}")
    report = check_symmetries(kernel, tol)
    if not report.verdicts[first]:
        raise ValueError(
            f"kernel does not satisfy the first symmetry {first} "
            f"(residual {report.residuals[first]:.3e} >= tol {tol:.3e})"
        )
    return [
        (pair, report.verdicts[pair[0]] == report.verdicts[pair[1]])
        for pair in EQUIVALENT_PAIRS[first]
    ]


@dataclass(frozen=True)
class DeviceVerdict:
    allowed: bool
    forbidden_by: tuple[str, ...]


def allowed_devices(report: SymmetryReport) -> dict:
    """Classify all six devices against the satisfied symmetries.

    A device is forbidden iff any satisfied nontrivial symmetry appears
    in its forbidding set; the verdict lists those symmetries.
    """
    satisfied = set(report.satisfied()) - {"I"}
    out = {}
    for code in DEVICE_CODES:
        blockers = tuple(c for c in SYMMETRY_CODES if c in (satisfied & FORBIDDING_SYMMETRIES[code]))
        out[code] = DeviceVerdict(allowed=not blockers, forbidden_by=blockers)
    return out


@dataclass(frozen=True)
class AmplitudeRelation:
    """A machine-checkable equality implied by a satisfied symmetry.

    ``residual`` evaluates |lhs - rhs| on a ScatteringAmplitudes value;
    conditional (phase) relations apply only when the amplitudes show the
    0/1 pattern named in ``condition`` and report 0 otherwise.
    """

    symmetry: str
    description: str
    needs_hatted: bool
    _residual: Callable
    condition: str | None = None
    _applies: Callable | None = None

    def applies(self, amps: ScatteringAmplitudes, gate_tol: float = 1e-2) -> bool:
        if self._applies is None:
            return True
        return self._applies(amps, gate_tol)

    def residual(self, amps: ScatteringAmplitudes, gate_tol: float = 1e-2) -> float:
        if self.needs_hatted and amps.hatted is None:
            raise ValueError(
                f"relation {self.description!r} needs hatted amplitudes; "
                f"solve with include_adjoint=True"
            )
        if not self.applies(amps, gate_tol):
            return 0.0
        return float(self._residual(amps))

    def holds(self, amps: ScatteringAmplitudes, tol: float = 1e-8) -> bool:
        return self.residual(amps) < tol


def _eq(symmetry, description, fn, needs_hatted=False):
    return AmplitudeRelation(symmetry, description, needs_hatted, fn)


def _gated(symmetry, description, fn, condition, gate, needs_hatted=False):
    return AmplitudeRelation(symmetry, description, needs_hatted, fn, condition, gate)


def _trans_asym(a: ScatteringAmplitudes, tol: float) -> bool:
    return abs(abs(a.Tl) - 1.0) < tol and abs(a.Tr) < tol


def _refl_asym(a: ScatteringAmplitudes, tol: float) -> bool:
    return abs(abs(a.Rl) - 1.0) < tol and abs(a.Rr) < tol


_RELATIONS = {
    "I": [],
    "II": [
        _eq("II", "T^l = That^l", lambda a: abs(a.Tl - a.hatted.Tl), True),
        _eq("II", "T^r = That^r", lambda a: abs(a.Tr - a.hatted.Tr), True),
        _eq("II", "R^l = Rhat^l", lambda a: abs(a.Rl - a.hatted.Rl), True),
        _eq("II", "R^r = Rhat^r", lambda a: abs(a.Rr - a.hatted.Rr), True),
        _eq("II", "|T^l| = |T^r|", lambda a: abs(abs(a.Tl) - abs(a.Tr))),
        _eq("II", "|R^l| = |R^r|", lambda a: abs(abs(a.Rl) - abs(a.Rr))),
    ],
    "III": [
        _eq("III", "T^l = T^r", lambda a: abs(a.Tl - a.Tr)),
        _eq("III", "R^l = R^r", lambda a: abs(a.Rl - a.Rr)),
    ],
    "IV": [
        _eq("IV", "T^l = That^r", lambda a: abs(a.Tl - a.hatted.Tr), True),
        _eq("IV", "T^r = That^l", lambda a: abs(a.Tr - a.hatted.Tl), True),
        _eq("IV", "R^l = Rhat^r", lambda a: abs(a.Rl - a.hatted.Rr), True),
        _eq("IV", "R^r = Rhat^l", lambda a: abs(a.Rr - a.hatted.Rl), True),
        _gated("IV", "R^r conj(R^l) = 1", lambda a: abs(a.Rr * np.conj(a.Rl) - 1.0),
               "perfect transmission asymmetry", _trans_asym),
        _gated("IV", "T^r conj(T^l) = 1", lambda a: abs(a.Tr * np.conj(a.Tl) - 1.0),
               "perfect reflection asymmetry", _refl_asym),
    ],
    "V": [
        _eq("V", "T^l = That^r", lambda a: abs(a.Tl - a.hatted.Tr), True),
        _eq("V", "T^r = That^l", lambda a: abs(a.Tr - a.hatted.Tl), True),
        _eq("V", "R^l = Rhat^l", lambda a: abs(a.Rl - a.hatted.Rl), True),
        _eq("V", "R^r = Rhat^r", lambda a: abs(a.Rr - a.hatted.Rr), True),
        _eq("V", "|R^l| = |R^r|", lambda a: abs(abs(a.Rl) - abs(a.Rr))),
        _gated("V", "|R^l| = |R^r| = 1",
               lambda a: max(abs(abs(a.Rl) - 1.0), abs(abs(a.Rr) - 1.0)),
               "perfect transmission asymmetry", _trans_asym),
    ],
    "VI": [
        _eq("VI", "T^l = T^r", lambda a: abs(a.Tl - a.Tr)),
    ],
    "VII": [
        _eq("VII", "T^l = That^l", lambda a: abs(a.Tl - a.hatted.Tl), True),
        _eq("VII", "T^r = That^r", lambda a: abs(a.Tr - a.hatted.Tr), True),
        _eq("VII", "R^l = Rhat^r", lambda a: abs(a.Rl - a.hatted.Rr), True),
        _eq("VII", "R^r = Rhat^l", lambda a: abs(a.Rr - a.hatted.Rl), True),
        _eq("VII", "|T^l| = |T^r|", lambda a: abs(abs(a.Tl) - abs(a.Tr))),
        _gated("VII", "|T^l| = |T^r| = 1",
               lambda a: max(abs(abs(a.Tl) - 1.0), abs(abs(a.Tr) - 1.0)),
               "perfect reflection asymmetry", _refl_asym),
    ],
    "VIII": [
        _eq("VIII", "R^l = R^r", lambda a: abs(a.Rl - a.Rr)),
    ],
}


def predicted_amplitude_relations(report: SymmetryReport) -> list[AmplitudeRelation]:
    """Amplitude equalities implied by every satisfied symmetry.

    Relations marked with a ``condition`` are the phase constraints that
    accompany 'possible' verdicts for perfect asymmetric devices; they
    activate only when the amplitudes actually show that 0/1 pattern.
    """
    out = []
    for code in SYMMETRY_CODES:
        if report.verdicts[code]:
            out.extend(_RELATIONS[code])
    return out
