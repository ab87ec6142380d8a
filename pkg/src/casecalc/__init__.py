"""casecalc: evaluation engine for structured assurance-case arguments."""

from .graph import (
    Attestation,
    BlockKind,
    CaseGraph,
    Link,
    LinkKind,
    Node,
    NodeKind,
    Resolution,
    RoleFlag,
    Severity,
    Template,
    instantiate_template,
)
from .structure import CaseLabel, StructuralReport, check_full_validity, check_soundness, check_validity
from .confirmation import (
    EvidenceAssessment,
    Measure,
    MeasureResult,
    ThresholdPolicy,
    accept_evidence,
    all_measures,
    diversity_boost,
)
from .propagation import (
    Color,
    ConfidenceAssignment,
    Origin,
    PropagationConfig,
    Rule,
    ValuationResult,
    apply_override,
    classify,
    flat_form,
    propagate,
    register_rule,
    remove_override,
)
from .defeaters import (
    DoubtCategory,
    Label,
    Labeling,
    ResidualDoubtEntry,
    ResidualDoubtLedger,
    label,
    residual_bound,
    resolve_defeater,
    severity_report,
)
from .reliability import (
    CbiStatus,
    ReliabilityScenario,
    bootstrap_schedule,
    cbi_gate,
    pfd,
    psrv,
)
from .document import CaseDocument, CaseMetadata, parse, parse_file, serialize
from .evaluation import EvaluationParams, EvaluationReport, View, evaluate_document

__version__ = "0.1.0"
