"""Double-RIS (conventional + STAR-RIS) NOMA under Nakagami-m fading.

Monte-Carlo channel simulation side by side with moment-matched Gamma
approximations of the end-to-end channels, and the outage probability and
ergodic rate that follow from them.
"""

from .channels import (ChannelRealization, ConfigError, LinkParams, SystemConfig,
                       path_loss, realize_channels, sample_nakagami_vector, simulate_gains)
from .experiments import (SweepResult, SweepSpec, emit_csv, figure_sweeps, load_config,
                          load_preset, read_csv, run_sweep, run_sweeps)
from .fitting import (CompositeMoments, DegenerateFitError, GammaParams, fit_h_indoor,
                      fit_h_outdoor, gamma_cdf, gamma_pdf, ks_distance)
from .metrics import (OutageResult, RateResult, ec_analytical, ec_empirical,
                      op_analytical, op_empirical, op_indoor_analytical,
                      op_outdoor_analytical)
from .special import (DomainError, NakagamiMoments, log_gamma, nakagami_moments,
                      reg_lower_incomplete_gamma)

__version__ = "0.1.0"
