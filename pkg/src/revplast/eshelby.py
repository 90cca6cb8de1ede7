"""Eshelby and Hill morphology tensors for spheroids in an isotropic matrix.

Conventions: the spheroid has unit equatorial semi-axes and symmetry-axis
semi-axis equal to the aspect ratio, with the symmetry axis along local x3.
All results are Mandel 6x6 matrices in that local frame; rotate with
:func:`revplast.tensors.rotate_ten4` for other orientations.

Two independent evaluation routes are provided: the classical closed forms
(with a series branch near the sphere where they cancel catastrophically) and
a direct spherical-surface quadrature of the Green-operator integral.  The
quadrature route exists to cross-check the closed forms and is used by the
self-test battery.
"""
from __future__ import annotations

import numpy as np

from .errors import MorphologyError
from .tensors import (J_PROJ, K_PROJ, bulk_shear_moduli, is_major_symmetric,
                      iso_stiffness, ten4_from_tensor, ten4_inv)

# Taylor coefficients of the transverse depolarization integral about the
# sphere (argument: aspect_ratio - 1); rational multiples of pi.
_I1_SERIES = np.pi * np.array([
    4.0 / 3.0, 8.0 / 15.0, -12.0 / 35.0, 64.0 / 315.0, -80.0 / 693.0,
    64.0 / 1001.0, -224.0 / 6435.0, 2048.0 / 109395.0, -2304.0 / 230945.0,
])

# inside this window the arccos/arccosh forms lose ~|w-1| in relative accuracy,
# so the series (truncation error ~|w-1|^9) takes over
_SERIES_WINDOW = 1e-3


def _depolarization_integrals(aspect_ratio: float) -> tuple[float, float]:
    """(I1, I13): transverse first integral and the mixed second integral."""
    w = aspect_ratio
    d = w - 1.0
    if abs(d) < _SERIES_WINDOW:
        # I1 = 4pi/3 + d*tail(d); I13 = 3*tail(d)/(2 + d) avoids the 0/0 at d=0
        tail = float(np.polyval(_I1_SERIES[:0:-1], d))
        return _I1_SERIES[0] + d * tail, 3.0 * tail / (2.0 + d)
    if w < 1.0:
        i1 = (2.0 * np.pi * w / (1.0 - w * w) ** 1.5) * (
            np.arccos(w) - w * np.sqrt(1.0 - w * w))
    else:
        i1 = (2.0 * np.pi * w / (w * w - 1.0) ** 1.5) * (
            w * np.sqrt(w * w - 1.0) - np.arccosh(w))
    i3 = 4.0 * np.pi - 2.0 * i1
    return i1, (i3 - i1) / (1.0 - w * w)


def eshelby_tensor(aspect_ratio: float, nu_matrix: float) -> np.ndarray:
    """Interior Eshelby tensor of a spheroid, Mandel 6x6, symmetry axis = x3.

    Transversely isotropic: a (11,22,33) normal block plus equal (23),(13)
    shears and the in-plane (12) shear tied to the normal block.
    """
    w = float(aspect_ratio)
    nu = float(nu_matrix)
    if w <= 0.0:
        raise ValueError(f"aspect ratio must be positive, got {w}")
    if not -1.0 < nu < 0.5:
        raise ValueError(f"matrix Poisson ratio must lie in (-1, 0.5), got {nu}")
    i1, i13 = _depolarization_integrals(w)
    i3 = 4.0 * np.pi - 2.0 * i1
    i12 = np.pi - i13 / 4.0
    i11 = i12
    i33 = (4.0 * np.pi / w**2 - 2.0 * i13) / 3.0
    q = 1.0 / (8.0 * np.pi * (1.0 - nu))
    m = 1.0 - 2.0 * nu
    s11 = q * (3.0 * i11 + m * i1)
    s12 = q * (i12 - m * i1)
    s13 = q * (w * w * i13 - m * i1)
    s31 = q * (i13 - m * i3)
    s33 = q * (3.0 * w * w * i33 + m * i3)
    s44 = 0.5 * q * ((1.0 + w * w) * i13 + m * (i1 + i3))  # 2323 = 1313
    s66 = q * (i12 + m * i1)                               # 1212
    s = np.zeros((6, 6))
    s[0, 0] = s[1, 1] = s11
    s[0, 1] = s[1, 0] = s12
    s[0, 2] = s[1, 2] = s13
    s[2, 0] = s[2, 1] = s31
    s[2, 2] = s33
    s[3, 3] = s[4, 4] = 2.0 * s44
    s[5, 5] = 2.0 * s66
    return s


def sphere_eshelby_coefficients(nu_matrix: float) -> tuple[float, float]:
    """Spherical/deviatoric coefficients of the sphere tensor alpha*J + beta*K."""
    nu = float(nu_matrix)
    return (1.0 + nu) / (3.0 * (1.0 - nu)), 2.0 * (4.0 - 5.0 * nu) / (15.0 * (1.0 - nu))


def _isotropic_moduli(c0: np.ndarray, tol: float = 1e-10) -> tuple[float, float]:
    k, mu = bulk_shear_moduli(c0)
    iso = 3.0 * k * J_PROJ + 2.0 * mu * K_PROJ
    if np.abs(c0 - iso).max() > tol * max(1.0, np.abs(c0).max()):
        raise MorphologyError("reference stiffness must be isotropic")
    return k, mu


def hill_tensor(aspect_ratio: float, c0: np.ndarray) -> np.ndarray:
    """Hill polarization tensor P = S : C0^{-1} for an isotropic matrix."""
    k, mu = _isotropic_moduli(c0)
    nu = (3.0 * k - 2.0 * mu) / (2.0 * (3.0 * k + mu))
    s = eshelby_tensor(aspect_ratio, nu)
    p = s @ ten4_inv(np.asarray(c0, dtype=float))
    if not is_major_symmetric(p, tol=1e-10):
        raise MorphologyError("Hill tensor lost major symmetry; inputs inconsistent")
    return 0.5 * (p + p.T)


def hill_tensor_quadrature(aspect_ratio: float, young: float, poisson: float,
                           n_polar: int = 512, n_azimuth: int = 32) -> np.ndarray:
    """Hill tensor from Gauss-Legendre quadrature of the Green-operator integral.

    Independent of the closed forms: integrates
    ``sym(zeta_i K^{-1}_jk zeta_l) / (zeta . Z^2 zeta)^{3/2}`` over the unit
    sphere, with Z = diag(1, 1, aspect_ratio) and K the acoustic tensor of the
    matrix.  The azimuthal trapezoid rule is exact here (the integrand is a
    short trigonometric polynomial in the azimuth); the polar Gauss order
    controls accuracy for extreme aspect ratios.
    """
    w = float(aspect_ratio)
    lam = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson))
    mu = young / (2.0 * (1.0 + poisson))
    chi = (lam + mu) / (lam + 2.0 * mu)
    u, wu = np.polynomial.legendre.leggauss(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    st = np.sqrt(1.0 - u**2)
    # unit directions, shape (npts, 3)
    z = np.stack([np.outer(st, np.cos(phi)).ravel(),
                  np.outer(st, np.sin(phi)).ravel(),
                  np.outer(u, np.ones(n_azimuth)).ravel()], axis=1)
    weights = (np.outer(wu, np.ones(n_azimuth)) * (2.0 * np.pi / n_azimuth)).ravel()
    denom = (z[:, 0] ** 2 + z[:, 1] ** 2 + (w * z[:, 2]) ** 2) ** 1.5
    kinv = (np.eye(3)[None, :, :] - chi * np.einsum("pi,pj->pij", z, z)) / mu
    g = np.einsum("pjk,pi,pl->pijkl", kinv, z, z)
    g = 0.25 * (g + g.transpose(0, 2, 1, 3, 4) + g.transpose(0, 1, 2, 4, 3)
                + g.transpose(0, 2, 1, 4, 3))
    p = np.einsum("p,pijkl->ijkl", weights / denom, g) * (w / (4.0 * np.pi))
    return ten4_from_tensor(p)


def eshelby_tensor_quadrature(aspect_ratio: float, poisson: float,
                              n_polar: int = 512, n_azimuth: int = 32) -> np.ndarray:
    """Eshelby tensor S = P : C0 via the quadrature route (scale-free in E)."""
    young = 1.0
    p = hill_tensor_quadrature(aspect_ratio, young, poisson, n_polar, n_azimuth)
    return p @ iso_stiffness(young, poisson)
