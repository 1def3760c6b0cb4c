"""Exact tensor-triangular geometry of quiver representation complexes.

Everything is computed over small commutative coefficient rings with exact
arithmetic: perfect complexes over a path algebra, their vertexwise tensor
and internal hom, supports over the prime spectrum, and the classification
machinery for thick tensor-ideals and compactly generated tensor-aisles.
"""

from .complexes import (
    ComplexMorphism,
    ComplexRQ,
    Representation,
    RepMorphism,
    box_tensor,
    change_ring,
    complex_r,
    cone,
    direct_sum_complexes,
    ensure_perfect,
    eval_vertex,
    homology,
    homology_fingerprint,
    homology_range,
    i_times,
    is_acyclic,
    kan_extend,
    koszul_complex,
    projective_rep,
    projective_resolution,
    rep_box,
    rep_direct_sum,
    rep_free,
    rep_zero,
    shift_complex,
    stalk_complex,
    unit_complex,
    unit_restriction,
    zero_complex,
)
from .errors import (
    BadElement,
    CyclicQuiver,
    DuplicateName,
    IndexOutOfRange,
    MonotonicityViolation,
    NonRegularRing,
    NotAField,
    NotDerivable,
    NotPerfect,
    QuiverTTError,
    RingMismatch,
    ShapeMismatch,
    UniverseNotClosed,
    UnknownArrow,
    UnknownName,
    UnknownVertex,
    UnsupportedRing,
    WorkspaceError,
)
from .homs import (
    ChainMapSpace,
    chom_complex,
    chom_rep,
    evaluation_map,
    hom_space,
    internal_hom,
    is_rigid,
    rigidity_report,
)
from .linalg import Matrix, cokernel_presentation, kernel_basis, rank, smith_normal_form, solve
from .quivers import Quiver, build_quiver, full_subquiver, is_dynkin, paths, point_quiver
from .rings import (
    FGModule,
    Integers,
    IntegersLocalized,
    IntegersMod,
    PolyOverPrimeField,
    PrimeField,
    PrimeIdeal,
    Rationals,
    Ring,
    SpClosedSet,
    enumerate_primes,
    module_support,
    parse_ring,
    prime_contains,
    prime_ideal,
    sp_all,
    sp_empty,
    sp_points,
)
from .spectrum import (
    BalmerPoint,
    PerVertexForm,
    QSupport,
    SpectrumWindow,
    VertexPosetMap,
    big_support_compact,
    compact_support,
    detecting_object,
    ideal_generators,
    ideal_membership,
    q_support,
    q_support_all,
    q_support_intersection,
    q_support_subset,
    q_support_union,
    spc_dot,
    spc_enumerate,
    thick_closure_bruteforce,
    translate_classification,
    untranslate_classification,
    vertex_poset_map,
    xi_zero_test,
)
from .tstruct import (
    Filtration,
    FiltrationSystem,
    SerreChain,
    aisle_membership,
    c_aisle_decompose,
    c_aisle_reassemble,
    check_filtration_system,
    component_restrict,
    component_times,
    filtration,
    filtration_from_objects,
    filtration_system,
    serre_chain,
    serre_translation,
    serre_untranslate,
    standard_filtration,
)
from .workspace import Workspace, build_workspace, load_filtration_file, load_workspace

__version__ = "0.1.0"
