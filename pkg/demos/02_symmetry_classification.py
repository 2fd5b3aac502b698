"""Classify kernels by the eight Klein-group symmetries.

Builds one kernel per symmetry class by projection, reports which of
the relations I..VIII each satisfies, and which of the six asymmetric
device types remain possible for it.
"""
import numpy as np

from asymscat import (
    DEVICE_CODES,
    SYMMETRY_CODES,
    RegularizedInverseSquare,
    SampledKernel,
    allowed_devices,
    check_symmetries,
    symmetrize,
)


def random_kernel(rng, n=201):
    g = np.linspace(-1, 1, n)
    c = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    vals = np.polynomial.polynomial.polyval2d(*np.meshgrid(g, g, indexing="ij"), c)
    return SampledKernel(g, vals)


def describe(name, kernel):
    report = check_symmetries(kernel)
    sats = ",".join(report.satisfied())
    devices = allowed_devices(report)
    allowed = ",".join(c for c in DEVICE_CODES if devices[c].allowed) or "none"
    print(f"{name:28s} satisfies [{sats:12s}]  allowed devices: {allowed}")


def main():
    rng = np.random.default_rng(0)
    print("symmetry codes: I identity | II hermiticity | III parity | "
          "IV parity-pseudoherm. | V time reversal |")
    print("                VI transpose-pseudoherm. | VII PT | VIII PT-pseudoherm.\n")

    describe("generic complex nonlocal", random_kernel(rng))
    for code in SYMMETRY_CODES[1:]:
        describe(f"projected onto class {code}", symmetrize(random_kernel(rng), code))

    g = np.linspace(-1, 1, 201)
    local = SampledKernel(g, np.exp(-4 * g * g) * (1 + 0.5j), is_local=True)
    describe("local complex profile", local)
    describe("regularized 1/(x - i eps)^2",
             RegularizedInverseSquare(alpha=0.1, epsilon=1e-3))


if __name__ == "__main__":
    main()
