"""Exactly solvable two-interval coupling: the 1D oracle for the abstract theory.

Ω₊ = (0,1) with a Dirichlet condition at 0 and Ω₋ = (1,2) with Dirichlet at 2
are coupled at x = 1.  The boundary space is one-dimensional, every Weyl
function, γ-field and Green kernel is an elementary sin/cos expression, and
the boundary maps follow the outward-derivative convention

    Γ₀^± f = f(1^∓),   Γ₁⁺ f = −f'(1⁻),   Γ₁⁻ f = +f'(1⁺),

so C¹ matching at the junction is exactly the coupling condition.  Because the
closed forms are exact, every residual here measures quadrature alone.

Unlike the planar operators, z may be any complex number away from the
relevant poles — the 1D spectra are discrete, so real z in spectral gaps is a
legitimate (and tested) regime.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import BracketingError, ConfigurationError, SpectralPoleError
from .reports import ResidualReport, timed_check

_BUMP_CENTERS = (0.3, 0.7, 1.0, 1.35, 1.8)
_BUMP_WIDTH = 0.12


def _omega(z, c) -> complex:
    return cmath.sqrt(complex(z) - c)


def _check_side(side: str) -> str:
    if side not in ("+", "-"):
        raise ConfigurationError(f"interval side must be '+' or '-', got {side!r}")
    return side


def scalar_weyl(side: str, z, c: float = 0.0) -> complex:
    """Closed-form Weyl value m(z) = −√(z−c)·cot√(z−c) of one side.

    Both sides share the formula (each is a unit interval with Dirichlet far
    end); ``side`` only selects which shift c belongs where in error text."""
    _check_side(side)
    w = _omega(z, c)
    if abs(w) < 1e-6:
        w2 = w * w
        return complex(-1.0 + w2 / 3.0 + w2 * w2 / 45.0)
    s = cmath.sin(w)
    if abs(s) < 1e-12 * (1.0 + abs(cmath.cos(w))):
        raise SpectralPoleError(
            f"z = {complex(z)} is a Dirichlet eigenvalue of side {side} (sin√(z−c) ≈ 0)"
        )
    return complex(-w * cmath.cos(w) / s)


def gamma_profile(side: str, z, c: float = 0.0) -> Callable:
    """γ-field of one side: the (−d²/dx²+c−z)-solution with boundary value 1
    at the junction and 0 at the far end."""
    _check_side(side)
    w = _omega(z, c)
    s = cmath.sin(w)
    if abs(s) < 1e-12 * (1.0 + abs(cmath.cos(w))):
        raise SpectralPoleError(f"γ-field pole: z = {complex(z)} on side {side}")
    if side == "+":
        return lambda x: np.sin(w * np.asarray(x)) / s
    return lambda x: np.sin(w * (2.0 - np.asarray(x))) / s


# --------------------------------------------------------------- Green kernels

@dataclass(frozen=True)
class _Kernel:
    """G(x,y) = −u₁(x_<)u₂(x_>)/W on (a,b), the standard Sturm–Liouville form.

    ``breaks`` lists interior points where u₁/u₂ lose smoothness (the coupled
    kernel's junction); quadrature panels must not straddle them."""

    a: float
    b: float
    u1: Callable
    u2: Callable
    wronskian: complex
    breaks: tuple = ()


def dirichlet_kernel(side: str, z, c: float = 0.0) -> _Kernel:
    _check_side(side)
    w = _omega(z, c)
    s = cmath.sin(w)
    if abs(s) < 1e-12 * (1.0 + abs(cmath.cos(w))):
        raise SpectralPoleError(f"Dirichlet resolvent pole at z = {complex(z)}, side {side}")
    if side == "+":
        return _Kernel(0.0, 1.0,
                       lambda x: np.sin(w * np.asarray(x)),
                       lambda x: np.sin(w * (1.0 - np.asarray(x))),
                       -w * s)
    return _Kernel(1.0, 2.0,
                   lambda x: np.sin(w * (np.asarray(x) - 1.0)),
                   lambda x: np.sin(w * (2.0 - np.asarray(x))),
                   -w * s)


def neumann_kernel_minus(z, c: float = 0.0) -> _Kernel:
    """Resolvent kernel of the Neumann-at-1, Dirichlet-at-2 side."""
    w = _omega(z, c)
    cw = cmath.cos(w)
    if abs(cw) < 1e-12 * (1.0 + abs(cmath.sin(w))):
        raise SpectralPoleError(f"Neumann resolvent pole at z = {complex(z)}")
    return _Kernel(1.0, 2.0,
                   lambda x: np.cos(w * (np.asarray(x) - 1.0)),
                   lambda x: np.sin(w * (2.0 - np.asarray(x))),
                   -w * cw)


def coupled_kernel(z, c_plus: float = 0.0, c_minus: float = 0.0) -> _Kernel:
    """Resolvent kernel of the coupled operator on (0,2): C¹ through x = 1."""
    wp, wm = _omega(z, c_plus), _omega(z, c_minus)

    def u1(x):
        x = np.asarray(x, dtype=float)
        left = np.sin(wp * x)
        right = cmath.sin(wp) * np.cos(wm * (x - 1.0)) \
            + (wp / wm) * cmath.cos(wp) * np.sin(wm * (x - 1.0))
        return np.where(x <= 1.0, left, right)

    def u2(x):
        x = np.asarray(x, dtype=float)
        right = np.sin(wm * (2.0 - x))
        left = cmath.sin(wm) * np.cos(wp * (1.0 - x)) \
            + (wm / wp) * cmath.cos(wm) * np.sin(wp * (1.0 - x))
        return np.where(x >= 1.0, right, left)

    wron = -cmath.sin(wp) * wm * cmath.cos(wm) - wp * cmath.cos(wp) * cmath.sin(wm)
    if abs(wron) < 1e-10 * (1.0 + abs(wp) + abs(wm)):
        raise SpectralPoleError(f"z = {complex(z)} is an eigenvalue of the coupled operator")
    return _Kernel(0.0, 2.0, u1, u2, wron, breaks=(1.0,))


_GL_CACHE: dict = {}


def _gl(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _partial_integrals(fn: Callable, starts, stops, t, w) -> np.ndarray:
    """∫ fn over (starts[k], stops[k]) by one mapped Gauss–Legendre panel each."""
    starts = np.asarray(starts, dtype=float)
    stops = np.asarray(stops, dtype=float)
    nodes = starts[:, None] + np.outer(stops - starts, t)
    vals = np.asarray(fn(nodes.ravel())).reshape(nodes.shape)
    return (vals @ w) * (stops - starts)


def apply_resolvent(kernel: _Kernel, phi: Callable, xs, quad_n: int = 64) -> np.ndarray:
    """(A−z)⁻¹φ at points xs: u(x) = −[u₂(x)∫_a^x u₁φ + u₁(x)∫_x^b u₂φ]/W.

    Integration is split at the kernel kink x and at every interior break, so
    each Gauss–Legendre panel sees an analytic integrand; φ must be an
    evaluable callable (closed-form bases keep this exact)."""
    xs = np.asarray(xs, dtype=float)
    t, w = _gl(quad_n)
    t = 0.5 * (t + 1.0)
    w = 0.5 * w
    f1 = lambda y: kernel.u1(y) * np.asarray(phi(y))
    f2 = lambda y: kernel.u2(y) * np.asarray(phi(y))
    edges = [kernel.a, *kernel.breaks, kernel.b]
    full1 = _partial_integrals(f1, edges[:-1], edges[1:], t, w)
    full2 = _partial_integrals(f2, edges[:-1], edges[1:], t, w)
    seg = np.searchsorted(np.asarray(edges[1:-1]), xs, side="right")
    left = np.zeros(xs.shape, dtype=complex)
    right = np.zeros(xs.shape, dtype=complex)
    for j in range(len(edges) - 1):
        mask = seg == j
        if not mask.any():
            continue
        xj = xs[mask]
        left[mask] = full1[:j].sum() + _partial_integrals(f1, np.full_like(xj, edges[j]), xj, t, w)
        right[mask] = full2[j + 1:].sum() + _partial_integrals(f2, xj, np.full_like(xj, edges[j + 1]), t, w)
    return -(kernel.u2(xs) * left + kernel.u1(xs) * right) / kernel.wronskian


def _integrate(fn: Callable, a: float, b: float, quad_n: int = 64) -> complex:
    t, w = _gl(quad_n)
    nodes = 0.5 * (b - a) * (t + 1.0) + a
    return complex(0.5 * (b - a) * np.dot(np.asarray(fn(nodes)), w))


def _gaussian_bump(center: float, width: float) -> Callable:
    return lambda x: np.exp(-(((np.asarray(x) - center) / width) ** 2))


def default_basis() -> list:
    """Five Gaussian bumps spread over (0,2), one straddling the junction."""
    return [_gaussian_bump(c, _BUMP_WIDTH) for c in _BUMP_CENTERS]


def _restrict(phi: Callable, a: float, b: float) -> Callable:
    def clipped(x):
        x = np.asarray(x)
        vals = np.asarray(phi(x))
        return np.where((x >= a) & (x <= b), vals, 0.0)

    return clipped


def _eval_points(a: float, b: float, n: int) -> np.ndarray:
    return np.linspace(a, b, n + 2)[1:-1]


# ----------------------------------------------------------- resolvent formulas

def krein_formula_check(z, c_plus: float = 0.0, c_minus: float = 0.0,
                        grid_n: int = 200, basis: Sequence[Callable] = None,
                        tolerance: float = 1e-8, quad_n: int = 64) -> ResidualReport:
    """Krein formula against the coupled closed-form resolvent, bump by bump.

    Left side: coupled kernel on (0,2).  Right side: decoupled Dirichlet
    resolvents plus the rank-one correction −γ(z)(m₊+m₋)⁻¹[γ₊*, γ₋*] with the
    no-conjugation adjoints of a dual pairing."""
    basis = default_basis() if basis is None else list(basis)
    mp = scalar_weyl("+", z, c_plus)
    mm = scalar_weyl("-", z, c_minus)
    denom = mp + mm
    if abs(denom) < 1e-10 * (abs(mp) + abs(mm)):
        raise SpectralPoleError(f"m₊+m₋ vanishes at z = {complex(z)}: coupled eigenvalue")
    coupled = coupled_kernel(z, c_plus, c_minus)
    g_plus = dirichlet_kernel("+", z, c_plus)
    g_minus = dirichlet_kernel("-", z, c_minus)
    gam_plus = gamma_profile("+", z, c_plus)
    gam_minus = gamma_profile("-", z, c_minus)
    xs_plus = _eval_points(0.0, 1.0, grid_n)
    xs_minus = _eval_points(1.0, 2.0, grid_n)

    rows = []
    for idx, phi in enumerate(basis):
        phi_p = _restrict(phi, 0.0, 1.0)
        phi_m = _restrict(phi, 1.0, 2.0)

        def residual():
            lhs_p = apply_resolvent(coupled, phi, xs_plus, quad_n)
            lhs_m = apply_resolvent(coupled, phi, xs_minus, quad_n)
            pair = (_integrate(lambda y: gam_plus(y) * phi_p(y), 0.0, 1.0, quad_n)
                    + _integrate(lambda y: gam_minus(y) * phi_m(y), 1.0, 2.0, quad_n))
            rhs_p = apply_resolvent(g_plus, phi_p, xs_plus, quad_n) - gam_plus(xs_plus) * pair / denom
            rhs_m = apply_resolvent(g_minus, phi_m, xs_minus, quad_n) - gam_minus(xs_minus) * pair / denom
            return float(max(np.abs(lhs_p - rhs_p).max(), np.abs(lhs_m - rhs_m).max()))

        rows.append(timed_check(
            "interval.krein",
            {"z": [complex(z).real, complex(z).imag], "c_plus": c_plus,
             "c_minus": c_minus, "basis": idx, "grid_n": grid_n},
            tolerance, residual,
        ))
    return ResidualReport(rows).sorted()


def mixed_formula_check(z, c_plus: float = 0.0, c_minus: float = 0.0,
                        grid_n: int = 200, basis: Sequence[Callable] = None,
                        tolerance: float = 1e-8, quad_n: int = 64) -> ResidualReport:
    """Dirichlet ⊕ Neumann resolvent formula, plus the standalone kernel
    difference (A₀₋−z)⁻¹ − (A₁₋−z)⁻¹ = γ₋ m₋⁻¹ γ₋*."""
    basis = default_basis() if basis is None else list(basis)
    mp = scalar_weyl("+", z, c_plus)
    mm = scalar_weyl("-", z, c_minus)
    if abs(mm) < 1e-12:
        raise SpectralPoleError(f"m₋(z) = 0 at z = {complex(z)}: mixed formula not invertible")
    sigma = -np.linalg.inv(np.array([[mp, 1.0], [1.0, -1.0 / mm]], dtype=complex))
    coupled = coupled_kernel(z, c_plus, c_minus)
    g_plus = dirichlet_kernel("+", z, c_plus)
    g_minus = dirichlet_kernel("-", z, c_minus)
    g1_minus = neumann_kernel_minus(z, c_minus)
    gam_plus = gamma_profile("+", z, c_plus)
    gam_minus = gamma_profile("-", z, c_minus)
    xs_plus = _eval_points(0.0, 1.0, grid_n)
    xs_minus = _eval_points(1.0, 2.0, grid_n)
    params = {"z": [complex(z).real, complex(z).imag], "c_plus": c_plus,
              "c_minus": c_minus, "grid_n": grid_n}

    rows = []
    for idx, phi in enumerate(basis):
        phi_p = _restrict(phi, 0.0, 1.0)
        phi_m = _restrict(phi, 1.0, 2.0)

        def residual():
            lhs_p = apply_resolvent(coupled, phi, xs_plus, quad_n)
            lhs_m = apply_resolvent(coupled, phi, xs_minus, quad_n)
            hat = np.array([
                _integrate(lambda y: gam_plus(y) * phi_p(y), 0.0, 1.0, quad_n),
                _integrate(lambda y: gam_minus(y) * phi_m(y), 1.0, 2.0, quad_n) / mm,
            ])
            corr = sigma @ hat
            rhs_p = apply_resolvent(g_plus, phi_p, xs_plus, quad_n) + gam_plus(xs_plus) * corr[0]
            rhs_m = apply_resolvent(g1_minus, phi_m, xs_minus, quad_n) \
                + (gam_minus(xs_minus) / mm) * corr[1]
            return float(max(np.abs(lhs_p - rhs_p).max(), np.abs(lhs_m - rhs_m).max()))

        rows.append(timed_check("interval.mixed", {**params, "basis": idx}, tolerance, residual))

        def res01():
            direct = apply_resolvent(g_minus, phi_m, xs_minus, quad_n) \
                - apply_resolvent(g1_minus, phi_m, xs_minus, quad_n)
            pairing = _integrate(lambda y: gam_minus(y) * phi_m(y), 1.0, 2.0, quad_n)
            return float(np.abs(direct - gam_minus(xs_minus) * pairing / mm).max())

        rows.append(timed_check("interval.res01", {**params, "basis": idx}, tolerance, res01))
    return ResidualReport(rows).sorted()


# ------------------------------------------------------------------ eigenvalues

def coupled_eigenvalues(c_plus: float = 0.0, c_minus: float = 0.0, count: int = 3) -> np.ndarray:
    """First ``count`` roots of m₊(z)+m₋(z) = 0 on the real axis.

    The function is real and strictly increasing between consecutive Dirichlet
    poles {(kπ)²+c_±}, so each inter-pole interval brackets exactly one root;
    poles are placed analytically and roots found by Brent's method.  For
    c₊ = c₋ = 0 the result is ((2j−1)π/2)², the part of the coupled spectrum
    visible off σ(A₀)."""
    if count < 1:
        raise ConfigurationError(f"count must be >= 1, got {count}")

    def f(x):
        return (scalar_weyl("+", x, c_plus) + scalar_weyl("-", x, c_minus)).real

    poles = sorted({c_plus + (k * np.pi) ** 2 for k in range(1, count + 3)}
                   | {c_minus + (k * np.pi) ** 2 for k in range(1, count + 3)})
    edges = [min(c_plus, c_minus)] + list(poles)
    roots = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        gap = hi - lo
        if gap <= 0.0:
            continue
        a, b = lo + 1e-9 * max(1.0, gap), hi - 1e-9 * max(1.0, gap)
        fa, fb = f(a), f(b)
        shrink = 0
        while fa > 0.0 and shrink < 6:  # pole-side offset overshot the root
            a = lo + (a - lo) * 1e-2
            fa = f(a)
            shrink += 1
        if fa > 0.0 or fb < 0.0:
            raise BracketingError(
                f"no sign change for m₊+m₋ on ({lo:.6g}, {hi:.6g}): f({a:.6g})={fa:.3g}, "
                f"f({b:.6g})={fb:.3g}"
            )
        roots.append(brentq(f, a, b, xtol=1e-14, rtol=8.9e-16))
        if len(roots) == count:
            break
    if len(roots) < count:
        raise BracketingError(f"found only {len(roots)} of {count} roots below {edges[-1]:.6g}")
    return np.asarray(roots)


# ------------------------------------------------------------ third Green (1D)

@dataclass(frozen=True)
class IntervalField:
    """A piecewise-C² pair on (0,1) ∪ (1,2): values with first and second
    derivative callables, enough to form Tf = −f'' + c f and both jumps."""

    plus: Callable
    minus: Callable
    d_plus: Callable
    d_minus: Callable
    dd_plus: Callable
    dd_minus: Callable


def third_green_identity_1d(field: IntervalField, c: float = 1.0, grid_n: int = 100,
                            tolerance: float = 1e-8, quad_n: int = 64) -> ResidualReport:
    """Residual of f = 𝒢Tf + 𝒟[Γ₀f] − 𝒮[Γ₁f] on both intervals.

    𝒢 is the closed-form inverse of the coupled A = −d²/dx² + c (invertible
    for c > 0), 𝒮φ = G_A(x,1)·φ, and 𝒟φ = −∂_y G_A(x,y)|_{y=1}·φ — the sign
    is pinned by the smooth-field oracle, for which both brackets vanish."""
    if c <= 0.0:
        raise ConfigurationError(f"the coupled operator needs c > 0 for invertibility, got {c}")
    kernel = coupled_kernel(0.0, c, c)
    bracket0 = complex(np.asarray(field.plus(np.array([1.0])))[0]
                       - np.asarray(field.minus(np.array([1.0])))[0])
    bracket1 = complex(-np.asarray(field.d_plus(np.array([1.0])))[0]
                       + np.asarray(field.d_minus(np.array([1.0])))[0])

    # −∂_y G_A(x, y)|_{y=1}: the y-derivative lands on whichever factor owns y
    u1_at_1 = complex(kernel.u1(np.array([1.0]))[0])
    u2_at_1 = complex(kernel.u2(np.array([1.0]))[0])
    du1_at_1 = complex(_omega(0.0, c) * cmath.cos(_omega(0.0, c)))  # u1' continued value
    # u2'(1) from the (1,2) branch: d/dx sin(ω(2−x)) = −ω cos(ω(2−x))
    du2_at_1 = complex(-_omega(0.0, c) * cmath.cos(_omega(0.0, c)))

    def single_layer(x):
        x = np.asarray(x, dtype=float)
        return -np.where(x <= 1.0,
                         kernel.u1(x) * u2_at_1,
                         u1_at_1 * kernel.u2(x)) / kernel.wronskian

    def double_layer(x):
        x = np.asarray(x, dtype=float)
        dy = np.where(x <= 1.0, kernel.u1(x) * du2_at_1, du1_at_1 * kernel.u2(x))
        return dy / kernel.wronskian

    def source(side):
        f_dd = field.dd_plus if side == "+" else field.dd_minus
        f_val = field.plus if side == "+" else field.minus
        return lambda x: -np.asarray(f_dd(x)) + c * np.asarray(f_val(x))

    xs_plus = _eval_points(0.0, 1.0, grid_n)
    xs_minus = _eval_points(1.0, 2.0, grid_n)
    t_plus = _restrict(source("+"), 0.0, 1.0)
    t_minus = _restrict(source("-"), 1.0, 2.0)

    def total_source(x):
        x = np.asarray(x)
        return np.where(x <= 1.0, t_plus(x), t_minus(x))

    def side_residual(xs, f_side):
        rhs = apply_resolvent(kernel, total_source, xs, quad_n) \
            + double_layer(xs) * bracket0 - single_layer(xs) * bracket1
        return float(np.abs(np.asarray(f_side(xs)) - rhs).max())

    params = {"c": c, "grid_n": grid_n,
              "bracket0": [bracket0.real, bracket0.imag],
              "bracket1": [bracket1.real, bracket1.imag]}
    rows = [
        timed_check("interval.green3.plus", params, tolerance,
                    lambda: side_residual(xs_plus, field.plus)),
        timed_check("interval.green3.minus", params, tolerance,
                    lambda: side_residual(xs_minus, field.minus)),
    ]
    return ResidualReport(rows).sorted()


# ------------------------------------------------------------ abstract identities

def abstract_identity_suite(zs, c_plus: float = 0.0, c_minus: float = 0.0,
                            trials: int = 5, seed: int = 7, tolerance: float = 1e-9,
                            quad_n: int = 64) -> ResidualReport:
    """Direct checks of the γ*/Weyl calculus at nonreal z, side by side.

    For each z: the pairing identity ∫γ(z)f = Γ₁(A₀−z)⁻¹f (evaluated by
    one-sided extrapolation of the resolvent toward the junction, so both
    routes are independent), and m(z) − m(z̄) = (z−z̄)∫|γ(z)|²."""
    rng = np.random.default_rng(seed)
    rows = []
    for z in zs:
        z = complex(z)
        if z.imag == 0.0:
            raise ConfigurationError(f"abstract identity suite needs nonreal z, got {z}")
        for side, c in (("+", c_plus), ("-", c_minus)):
            a, b = (0.0, 1.0) if side == "+" else (1.0, 2.0)
            gam = gamma_profile(side, z, c)
            m_z = scalar_weyl(side, z, c)
            m_zbar = scalar_weyl(side, z.conjugate(), c)
            params = {"z": [z.real, z.imag], "side": side, "c": c}

            def jaok2():
                gram = _integrate(lambda y: np.abs(gam(y)) ** 2, a, b, quad_n)
                return abs((m_z - m_zbar) - (z - z.conjugate()) * gram)

            rows.append(timed_check("interval.jaok2", params, tolerance, jaok2))

            kern = dirichlet_kernel(side, z, c)
            coefs = rng.normal(size=(trials, 4))

            def gsgs():
                worst = 0.0
                for ck in coefs:
                    def f(y):
                        y = np.asarray(y)
                        return (ck[0] + ck[1] * y + ck[2] * np.sin(2.0 * y)
                                + ck[3] * np.cos(3.0 * y))

                    pairing = _integrate(lambda y: gam(y) * f(y), a, b, quad_n)
                    # Γ₁ of u = (A₀−z)⁻¹f by one-sided polynomial extrapolation
                    dists = 0.002 * np.arange(1, 8)
                    pts = 1.0 + dists if side == "-" else 1.0 - dists
                    samples = apply_resolvent(kern, f, pts, quad_n)
                    scale = dists.max()
                    coef = np.linalg.solve(np.vander(dists / scale, increasing=True), samples)
                    slope = coef[1] / scale  # du/d(dist), dist growing away from x=1
                    # Γ₁⁺ = −u'(1⁻) = +slope on the left; Γ₁⁻ = +u'(1⁺) = +slope on the right
                    worst = max(worst, abs(pairing - slope))
                return worst

            rows.append(timed_check("interval.gsgs", params, tolerance, gsgs))
    return ResidualReport(rows).sorted()
