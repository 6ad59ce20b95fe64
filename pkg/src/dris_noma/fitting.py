"""Gamma approximations of the end-to-end channel magnitudes.

Every fit is built from an analytically propagated (mean, variance) pair,
so ``k * theta`` and ``k * theta**2`` reproduce those moments by
construction.  The ``closed_form_*`` functions evaluate the same shape and
scale from the expanded expressions and exist to cross-check the algebra.
"""

import math
from typing import NamedTuple

import numpy as np

from .special import nakagami_moments, reg_lower_incomplete_gamma


class DegenerateFitError(ValueError):
    """The channel magnitude is identically zero; no Gamma fit exists."""


class GammaParams(NamedTuple):
    shape: float
    scale: float

    @property
    def mean(self):
        return self.shape * self.scale

    @property
    def variance(self):
        return self.shape * self.scale ** 2

    @classmethod
    def from_moments(cls, mean, variance):
        if not (mean > 0 and variance > 0):
            raise DegenerateFitError(
                f"cannot match a Gamma law to mean={mean!r}, variance={variance!r}")
        return cls(mean * mean / variance, variance / mean)


class CompositeMoments(NamedTuple):
    """Moments of the pieces that make up ``|h_I|`` or ``|h_O|``.

    ``mu_x``/``sigma2_x`` describe one Rayleigh-approximated composite
    amplitude ``|x_n|``, ``mu_y``/``sigma2_y`` the coherently combined
    single-reflection sum through the conventional RIS, ``mu_z``/``sigma2_z``
    the STAR-RIS sum for the requested user (amplitude ``xi`` included).
    """

    mu_x: float
    sigma2_x: float
    mu_y: float
    sigma2_y: float
    mu_z: float
    sigma2_z: float


def composite_power(cfg):
    """Mean power of one composite element ``x_n`` seen by the STAR-RIS."""
    b = cfg.betas()
    links = cfg.links
    return (b["t"] * links["t"].omega
            + b["f"] * b["D"] * cfg.n_c * links["f"].omega * links["D"].omega)


def composite_moments(cfg, user, rayleigh_composite=False):
    """Moments entering the fit of ``|h_I|`` (``user="I"``) or ``|h_O|`` (``"O"``).

    ``|x_n|`` is taken as Rayleigh because the cascaded term is a sum over
    the conventional RIS.  When that term is switched off (scenario C or
    ``N_C = 0``) ``x_n`` is a single Nakagami gain and its exact moments are
    used instead, unless ``rayleigh_composite`` forces the Rayleigh form.
    """
    if user not in ("I", "O"):
        raise ValueError(f"user must be 'I' or 'O', got {user!r}")
    links = cfg.links
    b = cfg.betas()
    power = composite_power(cfg)
    cascaded = b["f"] * b["D"] * cfg.n_c
    if cascaded == 0.0 and not rayleigh_composite:
        mt = nakagami_moments(links["t"].m, links["t"].omega)
        mu_x = math.sqrt(b["t"]) * mt.mean
        sigma2_x = b["t"] * mt.variance
    else:
        mu_x = math.sqrt(math.pi * power / 4.0)
        sigma2_x = (4.0 - math.pi) * power / 4.0

    mf = nakagami_moments(links["f"].m, links["f"].omega)
    mg = nakagami_moments(links["g"].m, links["g"].omega)
    mu_y = cfg.n_c * mf.mean * mg.mean
    sigma2_y = cfg.n_c * (links["f"].omega * links["g"].omega - (mf.mean * mg.mean) ** 2)

    u = links["u_I" if user == "I" else "u_O"]
    mu = nakagami_moments(u.m, u.omega)
    mu_z = cfg.xi * cfg.n_s * mu_x * mu.mean
    # elements treated as independent although they share f
    sigma2_z = cfg.xi ** 2 * cfg.n_s * (u.omega * power - mu.mean ** 2 * mu_x ** 2)
    return CompositeMoments(mu_x, sigma2_x, mu_y, sigma2_y, mu_z, sigma2_z)


def indoor_moments(cfg, rayleigh_composite=False):
    """Analytical mean and variance of ``|h_I|``."""
    cm = composite_moments(cfg, "I", rayleigh_composite)
    beta_u = cfg.betas()["u_I"]
    return math.sqrt(beta_u) * cm.mu_z, beta_u * cm.sigma2_z


def outdoor_moments(cfg, rayleigh_composite=False):
    """Analytical mean and variance of ``|h_O|`` (sum of two independent parts)."""
    cm = composite_moments(cfg, "O", rayleigh_composite)
    b = cfg.betas()
    mean = math.sqrt(b["u_O"]) * cm.mu_z + math.sqrt(b["f"] * b["g"]) * cm.mu_y
    var = b["u_O"] * cm.sigma2_z + b["f"] * b["g"] * cm.sigma2_y
    return mean, var


def fit_h_indoor(cfg, rayleigh_composite=False):
    """Gamma fit of ``|h_I|``; raises :class:`DegenerateFitError` if it is zero."""
    if cfg.n_s < 1:
        raise DegenerateFitError("indoor user has no STAR-RIS elements (N_S = 0)")
    return GammaParams.from_moments(*indoor_moments(cfg, rayleigh_composite))


def fit_h_outdoor(cfg, rayleigh_composite=False):
    """Gamma fit of ``|h_O|`` matching the summed mean and variance."""
    return GammaParams.from_moments(*outdoor_moments(cfg, rayleigh_composite))


def closed_form_indoor(cfg):
    """Expanded shape/scale expressions for ``|h_I|`` (unit Nakagami spreads)."""
    b = cfg.betas()
    u = cfg.links["u_I"]
    mu = nakagami_moments(u.m, u.omega).mean
    gap = u.omega - mu ** 2 * math.pi / 4.0
    k = cfg.n_s * mu ** 2 * (math.pi / 4.0) / gap
    theta = (cfg.xi * math.sqrt(b["u_I"]) * math.sqrt(b["t"] + b["f"] * b["D"] * cfg.n_c)
             * gap / (math.sqrt(math.pi / 4.0) * mu))
    return GammaParams(k, theta)


def closed_form_outdoor(cfg):
    """Expanded shape/scale expressions for ``|h_O|`` (unit Nakagami spreads)."""
    b = cfg.betas()
    links = cfg.links
    mu_u = nakagami_moments(links["u_O"].m, links["u_O"].omega).mean
    mu_f = nakagami_moments(links["f"].m, links["f"].omega).mean
    mu_g = nakagami_moments(links["g"].m, links["g"].omega).mean
    power = b["t"] + b["f"] * b["D"] * cfg.n_c
    num = (math.sqrt(b["u_O"]) * cfg.xi * cfg.n_s * mu_u * math.sqrt(math.pi * power / 4.0)
           + math.sqrt(b["f"] * b["g"]) * cfg.n_c * mu_f * mu_g)
    den = (b["f"] * b["g"] * cfg.n_c
           * (links["f"].omega * links["g"].omega - mu_f ** 2 * mu_g ** 2)
           + cfg.xi ** 2 * b["u_O"] * cfg.n_s * power
           * (4.0 * links["u_O"].omega - mu_u ** 2 * math.pi) / 4.0)
    k = num ** 2 / den
    return GammaParams(k, num / k)


def gamma_pdf(p, x):
    """Gamma density, evaluated in the log domain."""
    x = np.asarray(x, dtype=float)
    k, theta = p
    with np.errstate(divide="ignore", invalid="ignore"):
        logpdf = (k - 1.0) * np.log(x) - x / theta - math.lgamma(k) - k * math.log(theta)
    out = np.exp(logpdf)
    if k == 1.0:
        out = np.where(x == 0, 1.0 / theta, out)
    elif k < 1.0:
        out = np.where(x == 0, np.inf, out)
    out = np.where(x < 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def gamma_cdf(p, x):
    """Gamma CDF ``P(k, x / theta)``."""
    k, theta = p
    return reg_lower_incomplete_gamma(k, np.divide(x, theta))


def ks_distance(p, samples):
    """Kolmogorov-Smirnov distance between the fitted CDF and ``samples``."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    cdf = gamma_cdf(p, s)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))
