from .rng import poisson_array, poisson_draw, stream_for
from .special import chi_square_sf

__all__ = ["poisson_array", "poisson_draw", "stream_for", "chi_square_sf"]
