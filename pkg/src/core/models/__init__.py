from .population import (
    GammaTriple,
    MomentConvention,
    PopulationMoments,
    RelativeMoments,
    gammas_from_moments,
    moments_from_gammas,
    relative_moments,
)
from .sample import Sample, SampleStats, SeedSpec

__all__ = [
    "GammaTriple",
    "MomentConvention",
    "PopulationMoments",
    "RelativeMoments",
    "gammas_from_moments",
    "moments_from_gammas",
    "relative_moments",
    "Sample",
    "SampleStats",
    "SeedSpec",
]
