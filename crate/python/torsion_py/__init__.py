"""Python bindings for the torsion census toolkit.

Everything is re-exported from the compiled extension: group metadata,
weight tables over F_p, torsion-weighted class numbers, censuses by
naive height, local reduction densities, and analytic rank-bound
constants. Torsion groups are addressed by label ("0", "2", ...,
"12", "2x2", "2x4", "2x6", "2x8"); exact rationals are returned as
(numerator, denominator) tuples or "num/den" strings.
"""

from torsion_py._native import (
    acceptance,
    average_rank_bound,
    c_constant,
    census,
    census_summary,
    class_numbers,
    defect,
    group_info,
    group_structure,
    groups,
    height,
    hurwitz_h,
    is_minimal_model,
    local_density,
    local_tally,
    moment_bound,
    predicted_singular_sum,
    prime_sums,
    reduction_type,
    region_area,
    sigma,
    singular_weight_sum,
    tail_bound,
    trace,
    weight_table,
)

__all__ = [
    "acceptance",
    "average_rank_bound",
    "c_constant",
    "census",
    "census_summary",
    "class_numbers",
    "defect",
    "group_info",
    "group_structure",
    "groups",
    "height",
    "hurwitz_h",
    "is_minimal_model",
    "local_density",
    "local_tally",
    "moment_bound",
    "predicted_singular_sum",
    "prime_sums",
    "reduction_type",
    "region_area",
    "sigma",
    "singular_weight_sum",
    "tail_bound",
    "trace",
    "weight_table",
]
