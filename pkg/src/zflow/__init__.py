"""zflow: nowhere-zero 3-flows, modulo-3 orientations and Z3-connectivity on small multigraphs."""

from .cutcensus import (
    CutCensus,
    degree_classes,
    edge_connectivity,
    enumerate_cuts,
    hypothesis_check,
)
from .errors import (
    HypothesisError,
    InternalInconsistency,
    InvalidArgument,
    ParseError,
    ResourceLimitError,
    ZFlowError,
)
from .flowsolve import (
    Certificate,
    FlowAssignment,
    Orientation,
    count_nz_zk_flows,
    find_beta_orientation,
    find_mod3_orientation,
    find_nz3_flow,
    flow_polynomial,
    orientation_to_nz3flow,
    tau,
    verify_certificate,
    verify_flow,
    verify_mod3_orientation,
    z3_connected,
)
from .gadgets import (
    extend_orientation,
    glue_k7,
    ltwz_check,
    recover_orientation,
    z0_augment_3flow,
    z0_augment_z3,
)
from .harness import GenSpec, generate, negative_controls, run_campaign, verify_theorem
from .multigraph import Multigraph
from .pipeline import augmentation_beta_orientation, augmentation_mod3_orientation

__version__ = "0.1.0"
