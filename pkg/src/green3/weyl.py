"""γ-fields and Dirichlet-to-Neumann (Weyl) maps for both sides of a curve.

The solution operator γ(z): boundary data → (−Δ−z)-solution is realized by a
single-layer ansatz, so M_±(z) = −τ_N^± γ_±(z) becomes −(½I ∓ K*) S⁻¹ with
the signs inherited from the jump relations in :mod:`green3.potentials`.
For Im z > 0 the maps are verified to be Herglotz: positive (weighted)
imaginary part, and M(z) − M(z)* = (z − z̄)·γ(z)*γ(z) with the right-hand
Gram computed by genuine domain quadrature of the fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AnsatzResonanceError, ConfigurationError
from .geometry import InterfaceCurve, QuadratureGrid
from .potentials import (
    assemble_adjoint_double_layer,
    assemble_single_layer,
    eval_single_layer_field,
)
from .reports import ResidualReport, timed_check
from .specfun import (
    SpectralPoint,
    as_spectral_point,
    fundamental_solution,
    fundamental_solution_gradient,
)

_SIDES = {"+": "interior", "interior": "interior", "-": "exterior", "exterior": "exterior"}


def _normalize_side(side: str) -> str:
    try:
        return _SIDES[side]
    except KeyError:
        raise ConfigurationError(f"side must be interior/exterior (or +/−), got {side!r}") from None


def _guard_resonance(singular_values: np.ndarray) -> None:
    smin, smax = singular_values[-1], singular_values[0]
    if smin < 1e-12 * smax:
        raise AnsatzResonanceError(
            f"single-layer boundary matrix is numerically singular (σ_min/σ_max = "
            f"{smin / smax:.2e}); perturb z slightly or refine the grid"
        )


class SingleLayerField:
    """Off-boundary field 𝒮_z ψ with an analytic gradient; callable on (k, 2) points."""

    def __init__(self, curve: InterfaceCurve, grid: QuadratureGrid, z: SpectralPoint,
                 density: np.ndarray, enforce_accuracy_region: bool = True):
        self.curve, self.grid, self.z = curve, grid, z
        self.density = np.asarray(density, dtype=complex)
        self.enforce_accuracy_region = enforce_accuracy_region
        self._weights = self.density * grid.arc_weights

    def __call__(self, points) -> np.ndarray:
        return eval_single_layer_field(
            self.curve, self.grid, self.z, self.density, points,
            enforce_accuracy_region=self.enforce_accuracy_region,
        )

    def gradient(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        squeeze = pts.ndim == 1
        pts = np.atleast_2d(pts)
        diff = pts[:, None, :] - self.grid.points[None, :, :]
        grads = fundamental_solution_gradient(2, self.z, diff.reshape(-1, 2)).reshape(diff.shape)
        out = np.einsum("j,ijk->ik", self._weights, grads)
        return out[0] if squeeze else out


def gamma_field(side: str, curve: InterfaceCurve, grid: QuadratureGrid, z, density,
                enforce_accuracy_region: bool = True) -> SingleLayerField:
    """Solve (−Δ − z)f = 0 on the chosen side with τ_D f = density."""
    _normalize_side(side)  # the ansatz field is two-sided; side only validates intent
    z = as_spectral_point(z)
    s_op = assemble_single_layer(curve, grid, z)
    _guard_resonance(np.linalg.svd(s_op.matrix, compute_uv=False))
    psi = np.linalg.solve(s_op.matrix, np.asarray(density, dtype=complex))
    return SingleLayerField(curve, grid, z, psi, enforce_accuracy_region)


@dataclass(frozen=True)
class WeylMap:
    side: str
    z: SpectralPoint
    grid: QuadratureGrid
    matrix: np.ndarray

    def __post_init__(self) -> None:
        self.matrix.flags.writeable = False

    def apply(self, density) -> np.ndarray:
        return self.matrix @ np.asarray(density, dtype=complex)


def dtn_map(side: str, curve: InterfaceCurve, grid: QuadratureGrid, z) -> WeylMap:
    """Weyl map M_side(z) = −τ_N^side γ_side(z) as a dense boundary matrix."""
    side = _normalize_side(side)
    z = as_spectral_point(z)
    s_op = assemble_single_layer(curve, grid, z)
    _guard_resonance(np.linalg.svd(s_op.matrix, compute_uv=False))
    ks_op = assemble_adjoint_double_layer(curve, grid, z)
    half = 0.5 * np.eye(grid.n)
    trace_op = half - ks_op.matrix if side == "interior" else half + ks_op.matrix
    mat = -trace_op @ np.linalg.inv(s_op.matrix)
    return WeylMap(side, z, grid, mat)


def mode_eigenvalue(weyl: WeylMap, m: int) -> complex:
    """Rayleigh quotient of e^{imθ} under the arc-weighted inner product.

    On the disk the Weyl maps are Fourier-diagonal, so this extracts the m-th
    symbol; elsewhere it is just a weighted average."""
    grid = weyl.grid
    phi = np.exp(1j * m * grid.nodes)
    w = grid.arc_weights
    return complex((phi.conj() * w) @ weyl.apply(phi) / ((phi.conj() * w) @ phi))


# ---------------------------------------------------------------- Herglotz checks

def _ring_profile_weights(z: SpectralPoint, freqs: np.ndarray, radii, radial_weights):
    """ρ_k = 2π ∫ |g̊_k(r)|² r dr where g̊_k(r) is the k-th angular Fourier profile
    of the single-layer kernel at radius r; per-ring FFT size grows like
    40/dist(boundary) so the trapezoid error stays below the ring's own scale."""
    rho = np.zeros(freqs.shape, dtype=float)
    gr_last = None
    for r_q, w_q in zip(radii, radial_weights):
        dist = abs(r_q - 1.0)
        n_up = 1 << max(8, math.ceil(math.log2(40.0 / dist)))
        s = 2.0 * np.pi * np.arange(n_up) / n_up
        # |p_r − y(s)| on the unit circle, p_r = (r, 0)
        chord = np.sqrt(np.maximum(r_q * r_q + 1.0 - 2.0 * r_q * np.cos(s), 1e-300))
        ring = fundamental_solution(2, z, chord)
        ghat = 2.0 * np.pi * np.fft.ifft(ring)
        gr_last = ghat[freqs % n_up]
        rho += w_q * r_q * np.abs(gr_last) ** 2
    return 2.0 * np.pi * rho, gr_last


def _gauss_legendre(a: float, b: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def herglotz_residuals(side: str, curve: InterfaceCurve, grid: QuadratureGrid, z,
                       modes: int = 12, tolerance: float = 1e-6,
                       outer_radius: float = 8.0) -> ResidualReport:
    """Positivity and the γ*γ identity for the Weyl map at nonreal z.

    Real z degenerates to self-adjointness (M = M*), reported as a single row.
    The identity row exists only on the disk, where the domain integral
    ∫ conj(γφ_a)(γφ_b) can be done by radial Gauss–Legendre × per-ring FFT;
    the exterior version truncates at ``outer_radius`` and reports the decay
    tail as its own row.
    """
    side = _normalize_side(side)
    z = as_spectral_point(z)
    if curve.shape != "disk" and z.z.imag != 0.0:
        raise ConfigurationError(
            "the γ*γ identity check integrates over disk-adapted polar grids; "
            "only curve 'disk' is supported (positivity alone works on any curve)"
        )
    weyl = dtn_map(side, curve, grid, z)
    w = grid.arc_weights
    wm = w[:, None] * weyl.matrix
    skew = wm - wm.conj().T  # W M − M^H W, anti-Hermitian analytically
    params = {"side": side, "curve": curve.shape, "n": grid.n,
              "z": [z.z.real, z.z.imag], "modes": modes}

    if z.z.imag == 0.0:
        row = timed_check(
            "herglotz.self_adjoint", params, 1e-8, lambda: np.abs(skew).max()
        )
        return ResidualReport([row]).sorted()

    def psd():
        # (M − M*)/(2i Im z) with * the W-adjoint: congruence by W^{−1/2} turns the
        # pencil (W M − M^H W, W) into an ordinary Hermitian eigenproblem
        herm = skew / (2j * z.z.imag)
        herm = 0.5 * (herm + herm.conj().T)
        scale = 1.0 / np.sqrt(w)
        lam_min = float(np.linalg.eigvalsh(scale[:, None] * herm * scale[None, :])[0])
        return max(0.0, -lam_min), {"lambda_min": lam_min}

    rows = [timed_check("herglotz.psd", params, tolerance, psd)]

    s_op = assemble_single_layer(curve, grid, z)
    n = grid.n
    mlist = np.arange(-modes, modes + 1)
    phis = np.exp(1j * np.outer(mlist, grid.nodes)) / math.sqrt(2.0 * np.pi)
    psis = np.linalg.solve(s_op.matrix, phis.T)  # densities, one column per mode
    coeffs = np.fft.fft(psis.T, axis=1) / n      # (modes, N) DFT of each density
    freqs = np.rint(np.fft.fftfreq(n, d=1.0 / n)).astype(int)

    if side == "interior":
        radii, rad_w = _gauss_legendre(0.0, 1.0, 64)
    else:
        radii, rad_w = _gauss_legendre(1.0, outer_radius, 96)
    rho, g_outer = _ring_profile_weights(z, freqs, radii, rad_w)
    gram = (coeffs.conj() * rho[None, :]) @ coeffs.T

    def identity():
        lhs = phis.conj() @ skew @ phis.T
        rhs = (z.z - z.z.conjugate()) * gram
        return float(np.abs(lhs - rhs).max())

    rows.append(timed_check("herglotz.identity", params, tolerance, identity))

    if side == "exterior":
        alpha = z.sqrt_z.imag

        def tail():
            # beyond R every profile decays at least like e^{−α(r−R)}; bound the
            # missing ∫_R^∞ |g|² r dr ring by ring and push through the mode sums
            tail_k = 2.0 * np.pi * np.abs(g_outer) ** 2 * (
                outer_radius / (2 * alpha) + 1.0 / (4 * alpha * alpha)
            )
            amp = np.abs(coeffs)
            bound = float(((amp * tail_k[None, :]) @ amp.T).max() * abs(z.z - z.z.conjugate()))
            return bound, {"outer_radius": outer_radius, "decay_rate": alpha}

        rows.append(timed_check("herglotz.tail", params, tolerance, tail))
    return ResidualReport(rows).sorted()
