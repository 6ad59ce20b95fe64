"""Link parameters, system configuration and Monte-Carlo channel realizations.

Small-scale fading is drawn once per batch and then combined with the
large-scale gains of a configuration.  Configurations that share RIS sizes,
Nakagami parameters and phase design therefore share their random draws,
which is what makes scenario and path-loss comparisons cheap and exact.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping, NamedTuple

import numpy as np

LINK_NAMES = ("f", "g", "t", "D", "u_I", "u_O")
SCENARIOS = ("A", "B", "C")
PHASE_DESIGNS = ("coherent", "random")
STAR_ALIGNMENTS = ("composite", "double")

# trials per independently seeded stream; changing it changes every MC result
BLOCK_SIZE = 250


class ConfigError(ValueError):
    """A configuration violates one of its invariants."""


@dataclass(frozen=True)
class LinkParams:
    m: float
    omega: float
    distance: float
    alpha: float

    def __post_init__(self):
        if not self.m >= 0.5:
            raise ConfigError(f"Nakagami shape m must be >= 0.5, got {self.m}")
        if not self.omega > 0:
            raise ConfigError(f"Nakagami spread omega must be > 0, got {self.omega}")
        if not self.distance > 0:
            raise ConfigError(f"link distance must be > 0, got {self.distance}")
        if not self.alpha >= 0:
            raise ConfigError(f"path-loss exponent must be >= 0, got {self.alpha}")


def path_loss(params, d0=1.0):
    """Large-scale power gain ``(d0 / d) ** alpha``."""
    if not d0 > 0:
        raise ConfigError(f"reference distance must be > 0, got {d0}")
    if not params.distance > 0:
        raise ConfigError(f"link distance must be > 0, got {params.distance}")
    return (d0 / params.distance) ** params.alpha


@dataclass(frozen=True)
class SystemConfig:
    """Everything needed to evaluate one operating point.

    ``links`` maps each of ``f, g, t, D, u_I, u_O`` to its :class:`LinkParams`.
    ``lambda_i + lambda_o`` may be below one so that the raw table1 power
    coefficients (0.15, 0.75) can be represented.
    """

    n_total: int
    split_factor: float
    links: Mapping[str, LinkParams]
    lambda_i: float
    lambda_o: float
    rho_db: float
    gamma_th_i: float
    gamma_th_o: float
    xi: float = 0.5
    scenario: str = "A"
    phase_design: str = "coherent"
    star_alignment: str = "composite"
    d0: float = 1.0

    def __post_init__(self):
        missing = set(LINK_NAMES) - set(self.links)
        if missing:
            raise ConfigError(f"missing link parameters: {sorted(missing)}")
        extra = set(self.links) - set(LINK_NAMES)
        if extra:
            raise ConfigError(f"unknown links: {sorted(extra)}")
        if int(self.n_total) != self.n_total or self.n_total < 1:
            raise ConfigError(f"n_total must be a positive integer, got {self.n_total}")
        if not 0.0 <= self.split_factor <= 1.0:
            raise ConfigError(f"split_factor must lie in [0, 1], got {self.split_factor}")
        if not 0.0 < self.xi < 1.0:
            raise ConfigError(f"xi must lie in (0, 1), got {self.xi}")
        for name in ("lambda_i", "lambda_o"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {v}")
        if not self.lambda_i < self.lambda_o:
            raise ConfigError(
                f"power allocation requires lambda_i < lambda_o, got "
                f"{self.lambda_i} >= {self.lambda_o}")
        if self.lambda_i + self.lambda_o > 1.0 + 1e-12:
            raise ConfigError(
                f"lambda_i + lambda_o must not exceed 1, got {self.lambda_i + self.lambda_o}")
        if not math.isfinite(self.rho_db):
            raise ConfigError(f"rho_db must be finite, got {self.rho_db}")
        if self.gamma_th_i < 0 or self.gamma_th_o < 0:
            raise ConfigError("SINR thresholds must be nonnegative")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.phase_design not in PHASE_DESIGNS:
            raise ConfigError(
                f"phase_design must be one of {PHASE_DESIGNS}, got {self.phase_design!r}")
        if self.star_alignment not in STAR_ALIGNMENTS:
            raise ConfigError(
                f"star_alignment must be one of {STAR_ALIGNMENTS}, got {self.star_alignment!r}")
        if not self.d0 > 0:
            raise ConfigError(f"d0 must be > 0, got {self.d0}")
        object.__setattr__(self, "n_total", int(self.n_total))
        object.__setattr__(self, "links", dict(self.links))

    def __hash__(self):
        return hash(self._key())

    def __eq__(self, other):
        if not isinstance(other, SystemConfig):
            return NotImplemented
        return self._key() == other._key()

    def _key(self):
        return (self.n_total, self.split_factor, tuple(sorted(self.links.items())),
                self.lambda_i, self.lambda_o, self.rho_db, self.gamma_th_i,
                self.gamma_th_o, self.xi, self.scenario, self.phase_design,
                self.star_alignment, self.d0)

    @property
    def n_c(self):
        # round half up; the epsilon absorbs eta*N landing just below .5
        return int(math.floor(self.split_factor * self.n_total + 0.5 + 1e-9))

    @property
    def n_s(self):
        return self.n_total - self.n_c

    @property
    def rho(self):
        return 10.0 ** (self.rho_db / 10.0)

    def betas(self):
        """Path-loss gains per link with the scenario's links switched off."""
        b = {name: path_loss(p, self.d0) for name, p in self.links.items()}
        if self.scenario == "B":
            b["t"] = 0.0
            b["g"] = 0.0
        elif self.scenario == "C":
            b["D"] = 0.0
        return b

    def with_link(self, name, **changes):
        """Copy with one link's parameters replaced, e.g. ``with_link("t", alpha=2.8)``."""
        if name not in self.links:
            raise ConfigError(f"unknown link {name!r}")
        links = dict(self.links)
        links[name] = replace(links[name], **changes)
        return replace(self, links=links)


class ChannelRealization(NamedTuple):
    h_i_mag: float
    h_o_mag: float


def sample_nakagami_vector(rng, n, params):
    """Complex gains with Nakagami(m, omega) magnitudes and uniform phases.

    ``n`` may be an int or a shape tuple.  All magnitudes are drawn before
    all phases.
    """
    shape = (n,) if np.ndim(n) == 0 else tuple(n)
    if any(s < 0 for s in shape):
        raise ValueError(f"invalid shape {shape}")
    mag = np.sqrt(rng.gamma(params.m, params.omega / params.m, size=shape))
    phase = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return mag * np.exp(1j * phase)


class Fading(NamedTuple):
    """One batch of small-scale fading; leading axis is the trial index."""

    f: np.ndarray       # (B, N_C)
    g: np.ndarray       # (B, N_C)
    t: np.ndarray       # (B, N_S)
    D: np.ndarray       # (B, N_C, N_S)
    u_i: np.ndarray     # (B, N_S)
    u_o: np.ndarray     # (B, N_S)
    theta: np.ndarray = None    # random-design phases, else None
    phi_i: np.ndarray = None
    phi_o: np.ndarray = None


def draw_fading(rng, n_c, n_s, links, phase_design="coherent", size=1):
    """Draw ``size`` trials in the fixed order f, g, t, D, u_I, u_O.

    Random-design RIS phases are drawn afterwards, so coherent and random
    designs see identical channels for the same stream.
    """
    f = sample_nakagami_vector(rng, (size, n_c), links["f"])
    g = sample_nakagami_vector(rng, (size, n_c), links["g"])
    t = sample_nakagami_vector(rng, (size, n_s), links["t"])
    D = sample_nakagami_vector(rng, (size, n_c, n_s), links["D"])
    u_i = sample_nakagami_vector(rng, (size, n_s), links["u_I"])
    u_o = sample_nakagami_vector(rng, (size, n_s), links["u_O"])
    if phase_design == "random":
        two_pi = 2.0 * np.pi
        theta = rng.uniform(0.0, two_pi, size=(size, n_c))
        phi_i = rng.uniform(0.0, two_pi, size=(size, n_s))
        phi_o = rng.uniform(0.0, two_pi, size=(size, n_s))
        return Fading(f, g, t, D, u_i, u_o, theta, phi_i, phi_o)
    return Fading(f, g, t, D, u_i, u_o)


def combine(fading, cfg, betas=None):
    """End-to-end complex gains ``(h_I, h_O)`` for every trial in ``fading``.

    ``betas`` overrides the scenario-adjusted path-loss gains of ``cfg``.
    """
    b = cfg.betas() if betas is None else betas
    random_design = fading.theta is not None

    if random_design:
        phase_c = np.exp(1j * fading.theta)
    else:
        # theta_n = -(angle f_n + angle g_n)
        phase_c = np.exp(-1j * (np.angle(fading.f) + np.angle(fading.g)))
    f_phi = fading.f * phase_c
    y = np.sum(f_phi * fading.g, axis=1)
    w = np.matmul(f_phi[:, None, :], fading.D)[:, 0, :]
    x = math.sqrt(b["t"]) * fading.t + math.sqrt(b["f"] * b["D"]) * w

    if random_design:
        phi_i, phi_o = fading.phi_i, fading.phi_o
        s_i = np.sum(x * np.exp(1j * phi_i) * fading.u_i, axis=1)
        s_o = np.sum(x * np.exp(1j * phi_o) * fading.u_o, axis=1)
    else:
        target = x if cfg.star_alignment == "composite" else w
        ang = np.angle(target)
        s_i = np.sum(x * np.exp(-1j * (ang + np.angle(fading.u_i))) * fading.u_i, axis=1)
        s_o = np.sum(x * np.exp(-1j * (ang + np.angle(fading.u_o))) * fading.u_o, axis=1)

    h_i = cfg.xi * math.sqrt(b["u_I"]) * s_i
    h_o = cfg.xi * math.sqrt(b["u_O"]) * s_o + math.sqrt(b["f"] * b["g"]) * y
    return h_i, h_o


def realize_channels(rng, cfg):
    """One Monte-Carlo draw of ``(|h_I|, |h_O|)``."""
    fading = draw_fading(rng, cfg.n_c, cfg.n_s, cfg.links, cfg.phase_design, size=1)
    h_i, h_o = combine(fading, cfg)
    return ChannelRealization(float(abs(h_i[0])), float(abs(h_o[0])))


def fading_signature(cfg):
    """Configs with equal signatures can share one set of fading draws."""
    small_scale = tuple((name, cfg.links[name].m, cfg.links[name].omega) for name in LINK_NAMES)
    return (cfg.n_c, cfg.n_s, small_scale, cfg.phase_design)


def block_rng(seed, block):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _simulate_blocks(cfgs, seed, trials, blocks):
    first = cfgs[0]
    out = [([], []) for _ in cfgs]
    for blk in blocks:
        size = min(BLOCK_SIZE, trials - blk * BLOCK_SIZE)
        rng = block_rng(seed, blk)
        fading = draw_fading(rng, first.n_c, first.n_s, first.links, first.phase_design, size)
        for cfg, (hi_list, ho_list) in zip(cfgs, out):
            h_i, h_o = combine(fading, cfg)
            hi_list.append(np.abs(h_i))
            ho_list.append(np.abs(h_o))
    return out


def simulate_gains(cfgs, trials, seed, workers=1):
    """Magnitudes ``(|h_I|, |h_O|)`` over ``trials`` draws for each config.

    All configs must share a :func:`fading_signature`; they are evaluated on
    the same draws.  Trials are split into blocks of ``BLOCK_SIZE``, block
    ``b`` using the stream ``SeedSequence(seed, spawn_key=(b,))``, so the
    result does not depend on ``workers``.
    """
    single = isinstance(cfgs, SystemConfig)
    if single:
        cfgs = [cfgs]
    cfgs = list(cfgs)
    if not cfgs:
        return []
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    sig = fading_signature(cfgs[0])
    if any(fading_signature(c) != sig for c in cfgs[1:]):
        raise ValueError("configs passed together must share RIS sizes, "
                         "Nakagami parameters and phase design")

    n_blocks = -(-trials // BLOCK_SIZE)
    if workers > 1 and n_blocks > 1:
        chunks = [list(range(i, n_blocks, workers)) for i in range(workers)]
        chunks = [c for c in chunks if c]
        with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
            parts = list(ex.map(_simulate_blocks, [cfgs] * len(chunks),
                                [seed] * len(chunks), [trials] * len(chunks), chunks))
        by_block = {}
        for chunk, part in zip(chunks, parts):
            for j, blk in enumerate(chunk):
                by_block[blk] = [(hi[j], ho[j]) for hi, ho in part]
        results = [
            (np.concatenate([by_block[b][i][0] for b in range(n_blocks)]),
             np.concatenate([by_block[b][i][1] for b in range(n_blocks)]))
            for i in range(len(cfgs))]
    else:
        part = _simulate_blocks(cfgs, seed, trials, range(n_blocks))
        results = [(np.concatenate(hi), np.concatenate(ho)) for hi, ho in part]
    return results[0] if single else results
