"""Exact Bowen balls, separated sets and dynamical Ramsey colourings for circle maps."""

__version__ = "0.1.0"

from .circle import (  # noqa: E402
    Arc,
    ArcUnion,
    arc_intersect,
    arc_translate,
    circle_dist,
    complement,
    measure,
    open_ball,
    reduce,
)
from .dynamics import (  # noqa: E402
    PLCircleMap,
    bowen_ball,
    bowen_dist,
    iterate,
    make_pl,
    make_times_p,
    preimage,
)
from .separated import (  # noqa: E402
    SeparatedSetReport,
    SeparationGraph,
    build_separation_graph,
    greedy_max_separated,
    grid,
    is_separated,
    least_sep_index,
    max_separated_exact,
    packing_upper_bound,
)
from .coloring import (  # noqa: E402
    EdgeColoring,
    RamseyCertificate,
    color_complete_graph,
    doubling_coloring,
    emit_certificate,
    find_mono_clique,
    verify_certificate,
)
from .verifiers import (  # noqa: E402
    VerificationReport,
    min_expansion_p,
    shadow_many,
    shadow_orbit,
    transfer_separated,
    verify_ball_measure,
    verify_capacity_circle,
    verify_component_ratio,
    verify_grid_separated,
    verify_translation,
)
