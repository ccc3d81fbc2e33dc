"""Exact slope stability of surface tangent bundles across the ample cone."""

__version__ = "0.1.0"

from .chambers import (  # noqa: E402
    Chamber,
    ChamberId,
    SegmentReport,
    chamber_id,
    check_convexity,
    decompose,
    segment_analysis,
)
from .lattice import AmpleCone, DivClass, NSLattice, is_ample, pair, primitive  # noqa: E402
from .model import SheafDescriptor, SurfaceModel  # noqa: E402
from .mrc import (  # noqa: E402
    MRCResult,
    epsilon_interval,
    find_positive_polarization,
    mrc_polarization,
    mrc_ray_search,
)
from .stability import (  # noqa: E402
    HNFResult,
    Semistable,
    TwoStep,
    destabilizes,
    hn_filtration,
    max_destabilizer,
    positive_length,
    slope,
    wall_class,
)
from .zoo import (  # noqa: E402
    builtin,
    check_aut_invariance,
    from_config,
    hirzebruch,
    product_with_line,
    to_config,
)
