"""Clustering trees: top-down induction with distance-prototype splits."""

from .dataset import (
    MISSING,
    AttributeSchema,
    DataError,
    Dataset,
    Example,
    GroundFact,
    encode_nominals,
    parse_attribute_mapping,
    parse_csv,
    parse_interpretations,
    serialize_csv,
    set_class,
)
from .evaluation import (
    EvalReport,
    LeafLabels,
    assign_leaf_labels,
    corrupt_missing,
    crossvalidate,
    missing_info_experiment,
    multi_attribute_experiment,
    multi_attribute_report,
    predict,
    pruning_sweep,
)
from .induction import (
    ClusteringTree,
    InduceConfig,
    InvalidPartition,
    Node,
    TooFewExamples,
    best_split,
    f_statistic,
    f_test_accept,
    induce_tree,
    score_split,
    sort_into_leaf,
)
from .logic import (
    AttributeTest,
    Binding,
    Constant,
    Literal,
    LiteralTest,
    PathContext,
    Template,
    TemplateError,
    TemplateSet,
    Variable,
    generate_candidates,
    match_query,
    parse_literal_test,
    parse_template_spec,
)
from .metrics import (
    DistanceSpec,
    DistanceUndefined,
    MetricError,
    Prototype,
    REUndefined,
    SplitStatistics,
    cluster_distance,
    distance,
    prototype,
    relative_error,
    sum_squares,
)
from .pruning import (
    CLASSIFICATION,
    CLUSTERING,
    QualityMeasure,
    prune,
    split_learn_set,
    tree_quality,
)
from .treeio import load_tree, render_tree, serialize_tree

__version__ = "0.1.0"
