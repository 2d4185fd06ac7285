from .driver import (
    RunConfig,
    RunResult,
    RunStatus,
    halpern_baseline,
    run,
    verify_trace,
)
from .geometry import (
    HalfSpace,
    Vector,
    halfspace_from_pair,
    inner,
    norm,
    project_onto_halfspace,
)
from .operators import (
    contraction_operator,
    ell2_example,
    identity_operator,
    sign_operator,
    subgradient_projector,
    translation_operator,
)
from .polyproject import Polyhedron, brute_force_project

__all__ = [
    'HalfSpace',
    'Polyhedron',
    'RunConfig',
    'RunResult',
    'RunStatus',
    'Vector',
    'brute_force_project',
    'contraction_operator',
    'ell2_example',
    'halfspace_from_pair',
    'halpern_baseline',
    'identity_operator',
    'inner',
    'norm',
    'project_onto_halfspace',
    'run',
    'sign_operator',
    'subgradient_projector',
    'translation_operator',
    'verify_trace',
]
