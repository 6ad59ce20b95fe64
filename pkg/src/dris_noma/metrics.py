"""Outage probability and ergodic rate of the two NOMA users.

Analytical values come from the Gamma fits; empirical values from
Monte-Carlo gains produced by :func:`dris_noma.channels.simulate_gains`.
A user whose channel is identically zero (no elements serving it) is
treated as a point mass at zero: outage 1, rate 0.
"""

import math
from typing import NamedTuple

import numpy as np

from .channels import simulate_gains
from .fitting import DegenerateFitError, fit_h_indoor, fit_h_outdoor, gamma_cdf


class OutageResult(NamedTuple):
    op_indoor: float
    op_outdoor: float
    se_indoor: float = 0.0
    se_outdoor: float = 0.0


class RateResult(NamedTuple):
    rate_indoor: float
    rate_outdoor: float
    se_indoor: float = 0.0
    se_outdoor: float = 0.0

    @property
    def sum_rate(self):
        return self.rate_indoor + self.rate_outdoor


def threshold_from_rate(rate):
    """SINR threshold for a target rate in bits per channel use."""
    return 2.0 ** rate - 1.0


def sinr_indoor(h_mag, cfg):
    """``(SINR of the outdoor message at U_I, post-SIC SNR of U_I)``."""
    g = cfg.rho * np.square(h_mag)
    return g * cfg.lambda_o / (g * cfg.lambda_i + 1.0), g * cfg.lambda_i


def sinr_outdoor(h_mag, cfg):
    """SINR of U_O, treating the indoor signal as interference."""
    g = cfg.rho * np.square(h_mag)
    return g * cfg.lambda_o / (g * cfg.lambda_i + 1.0)


def power_split_feasible(cfg):
    return cfg.lambda_o > cfg.lambda_i * cfg.gamma_th_o


def outdoor_threshold(cfg):
    """Smallest ``|h|`` at which the outdoor message is decodable."""
    if not power_split_feasible(cfg):
        return math.inf
    return math.sqrt(cfg.gamma_th_o / (cfg.rho * (cfg.lambda_o - cfg.lambda_i * cfg.gamma_th_o)))


def indoor_threshold(cfg):
    """Smallest ``|h_I|`` at which U_I decodes both messages."""
    if not power_split_feasible(cfg):
        return math.inf
    own = math.sqrt(cfg.gamma_th_i / (cfg.lambda_i * cfg.rho))
    return max(outdoor_threshold(cfg), own)


def _fit_or_none(fit, cfg):
    try:
        return fit(cfg)
    except DegenerateFitError:
        return None


def op_indoor_analytical(cfg):
    x = indoor_threshold(cfg)
    if math.isinf(x):
        return 1.0
    p = _fit_or_none(fit_h_indoor, cfg)
    if p is None:
        return 1.0
    return gamma_cdf(p, x)


def op_outdoor_analytical(cfg):
    x = outdoor_threshold(cfg)
    if math.isinf(x):
        return 1.0
    p = _fit_or_none(fit_h_outdoor, cfg)
    if p is None:
        return 0.0 if x == 0.0 else 1.0
    return gamma_cdf(p, x)


def op_analytical(cfg):
    return OutageResult(op_indoor_analytical(cfg), op_outdoor_analytical(cfg))


def outage_from_gains(h_i, h_o, cfg):
    """Empirical outage fractions with binomial standard errors."""
    to_i, snr_i = sinr_indoor(h_i, cfg)
    out_i = (to_i <= cfg.gamma_th_o) | (snr_i <= cfg.gamma_th_i)
    out_o = sinr_outdoor(h_o, cfg) < cfg.gamma_th_o
    n = len(out_i)
    p_i, p_o = float(out_i.mean()), float(out_o.mean())
    return OutageResult(p_i, p_o,
                        math.sqrt(p_i * (1.0 - p_i) / n), math.sqrt(p_o * (1.0 - p_o) / n))


def op_empirical(seed, cfg, trials, workers=1):
    """Monte-Carlo outage over ``trials`` channel draws seeded by ``seed``."""
    h_i, h_o = simulate_gains(cfg, trials, seed, workers)
    return outage_from_gains(h_i, h_o, cfg)


def second_moment(p, exact=False):
    """``E[|h|^2]`` of a Gamma magnitude; ``(k theta)^2`` unless ``exact``."""
    k, theta = p
    if exact:
        # theta^2 Gamma(k+2)/Gamma(k)
        return theta * theta * k * (k + 1.0)
    return (k * theta) ** 2


def ec_analytical(cfg, exact=False):
    """Ergodic rates from the Jensen bound with the fitted second moments.

    With ``exact=False`` the large-shape approximation ``E|h|^2 = (k theta)^2``
    is used; ``exact=True`` uses ``theta^2 k (k + 1)``.
    """
    p_i = _fit_or_none(fit_h_indoor, cfg)
    p_o = _fit_or_none(fit_h_outdoor, cfg)
    rho = cfg.rho
    r_i = 0.0
    if p_i is not None:
        r_i = math.log2(1.0 + rho * cfg.lambda_i * second_moment(p_i, exact))
    r_o = 0.0
    if p_o is not None:
        s = rho * second_moment(p_o, exact)
        r_o = math.log2(1.0 + s * cfg.lambda_o / (s * cfg.lambda_i + 1.0))
    return RateResult(r_i, r_o)


def rates_from_gains(h_i, h_o, cfg):
    """Sample-mean ergodic rates with their standard errors."""
    _, snr_i = sinr_indoor(h_i, cfg)
    r_i = np.log2(1.0 + snr_i)
    r_o = np.log2(1.0 + sinr_outdoor(h_o, cfg))
    n = len(r_i)
    if n > 1:
        se_i = float(r_i.std(ddof=1) / math.sqrt(n))
        se_o = float(r_o.std(ddof=1) / math.sqrt(n))
    else:
        se_i = se_o = 0.0
    return RateResult(float(r_i.mean()), float(r_o.mean()), se_i, se_o)


def ec_empirical(seed, cfg, trials, workers=1):
    """Monte-Carlo ergodic rates over ``trials`` draws seeded by ``seed``."""
    h_i, h_o = simulate_gains(cfg, trials, seed, workers)
    return rates_from_gains(h_i, h_o, cfg)
