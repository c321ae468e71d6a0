"""Two-bin allocation with power-law feedback: races, explosion times, reflected chains."""

from urnlab.dp import race_prob_cap_sweep, race_prob_exact, race_table
from urnlab.errors import (
    ConfigError,
    GridTooLarge,
    NotExplosive,
    OutOfRegime,
    StartedOutsideDomain,
    TooFewSamples,
    Unclassified,
    UrnlabError,
)
from urnlab.explosion import (
    BirthProcessSpec,
    InitialCurveSpec,
    classify_unreflected,
    critical_curve,
    explosion_moments,
    monopoly_prob_normal,
    sample_explosion_times,
)
from urnlab.feedback import BinState, FeedbackParams, RaceSpec, monopoly_prob_mc, race_to_caps
from urnlab.reflected import BoundarySpec, CurveSpec, predict_regime, run_many, run_with_stats
from urnlab.rng import Stream, derive_replica_stream
from urnlab.stats import ks_statistic

__version__ = "0.1.0"

__all__ = [
    "BinState", "BirthProcessSpec", "BoundarySpec", "ConfigError", "CurveSpec", "FeedbackParams",
    "GridTooLarge", "InitialCurveSpec", "NotExplosive", "OutOfRegime", "RaceSpec",
    "StartedOutsideDomain", "Stream", "TooFewSamples", "Unclassified", "UrnlabError",
    "classify_unreflected", "critical_curve", "derive_replica_stream", "explosion_moments",
    "ks_statistic", "monopoly_prob_mc", "monopoly_prob_normal", "predict_regime",
    "race_prob_cap_sweep", "race_prob_exact", "race_table", "race_to_caps", "run_many",
    "run_with_stats", "sample_explosion_times",
]
