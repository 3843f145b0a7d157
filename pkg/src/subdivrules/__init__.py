"""Combinatorial subdivision rules, their history graphs and realizations."""
from .axioms import (
    AxiomReport,
    ConditionResult,
    InferenceError,
    check_axioms,
    edge_preimages,
    infer_rule,
    refine_labels,
)
from .export import StatsReport, export_dot, stats
from .gallery import RULES, barydual, cycdb, ident
from .generate import RuleBounds, random_rule
from .graphs import (
    FREE,
    Edge,
    GraphError,
    LabeledGraph,
    LabeledIsomorphism,
    are_isomorphic,
    canonical_form,
    canonical_labeling,
    fragment_preimage,
    open_star,
)
from .planar import (
    RULES2D,
    SURFACES,
    Surface2D,
    SubdivisionRule2D,
    dual_graph,
    history_graph_2d,
    nonideal_tiles,
    subdivide_surface,
)
from .realize import (
    Cell3,
    CellularMap,
    Complex3,
    Pair3D,
    build_base_complex,
    build_pair,
    build_seed_complex,
    build_subdivided_complex,
    history_from_cells,
    verify_realization,
)
from .rules import (
    CombRule,
    HistoryGraph,
    LabelAlphabet,
    RuleError,
    Stub,
    VertexRule,
    build_history,
    expand_level,
    validate_rule,
)
from .textio import RuleSyntaxError, parse_history, parse_rule, render_history, render_rule

__version__ = "0.1.0"
