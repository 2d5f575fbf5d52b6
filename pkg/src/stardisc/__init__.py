"""Small-sample star-discrepancy: chaining constants, bracketing bounds, certified point sets."""

from .chaining import (
    coefficient_table,
    compute_K,
    final_constant,
    probability_budget,
    solve_c,
    verify_sum_all,
)
from .core import AnchorBox, CountingMode, PointSet, load_pointset, save_pointset
from .covering import (
    bound_lemma_sum,
    bound_prop_improved,
    bound_thm_gnewuch,
    build_grid_cover,
    find_bracket,
)
from .discrepancy import cover_bound_discrepancy, exact_star_discrepancy, sampled_lower_bound
from .generation import equidistant_1d, generate_certified, hammersley_2d, uniform_random

__version__ = "0.1.0"
