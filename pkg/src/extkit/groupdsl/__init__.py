"""Text descriptions of countable abelian groups and their truncations."""

from .ast import (
    INF,
    OMEGA,
    Characteristic,
    Cyclic,
    DirectSum,
    Fg,
    Localized,
    PatternSum,
    PGroup,
    Prufer,
    Q_EXPR,
    Rank1,
    ZERO,
    direct_sum,
)
from .jsonio import from_json, to_json
from .parser import DslError, DslSemanticError, DslSyntaxError, parse, to_text
from .semantics import (
    LayerSpec,
    Truncation,
    Unsupported,
    bind,
    is_torsion,
    is_torsion_free,
    layer_specs,
    primary_component,
    summand,
    torsion_free_part,
    torsion_part,
    truncate,
    validate,
)
