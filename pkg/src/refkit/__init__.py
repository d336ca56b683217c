"""Toolkit for multiple-choice reference resolution data pipelines.

Turns parsed screens and candidate entity lists into the textual prompts a
resolver model consumes, generates labeled synthetic datasets from slot
templates, and scores raw resolver output under order-free set matching.
"""

from .cluster_encoder import (
    Cluster,
    ClusterEncoding,
    assign_entity_cluster,
    build_cluster_encoding,
    dbscan_cluster,
    encode_clusters,
    rect_distance,
)
from .entity_textualizer import (
    FieldSpec,
    RuleConflictError,
    RuleRegistry,
    TextualizationRule,
    default_registry,
    load_rules,
    textualize_entity,
)
from .eval_harness import (
    AccuracyReport,
    ConstantResolver,
    EvaluationError,
    OracleResolver,
    Prediction,
    RemoteResolver,
    Resolver,
    ResolverError,
    evaluate_dataset,
    parse_prediction,
    score,
)
from .layout_encoder import (
    EncoderConfig,
    Level,
    OnscreenParse,
    PlacedObject,
    collect_objects,
    encode_screen,
    group_levels,
    render_parse,
    sort_objects,
)
from .prompt_builder import (
    INSTRUCTION,
    Prompt,
    build_conversational_prompt,
    build_onscreen_prompt,
    prompt_for_datapoint,
    shuffle_entities,
)
from .screen_model import (
    BBox,
    DataPoint,
    DatasetError,
    Entity,
    Placement,
    Point,
    ScreenObject,
    bbox_center,
    load_dataset,
    parse_dataset,
    save_dataset,
)
from .synth_datagen import (
    LanguageTemplate,
    SlotList,
    TemplateError,
    expand_template,
    expansion_count,
    generate_datapoints,
    load_templates,
)

__all__ = [
    "AccuracyReport",
    "BBox",
    "Cluster",
    "ClusterEncoding",
    "ConstantResolver",
    "DataPoint",
    "DatasetError",
    "EncoderConfig",
    "Entity",
    "EvaluationError",
    "FieldSpec",
    "INSTRUCTION",
    "LanguageTemplate",
    "Level",
    "OnscreenParse",
    "OracleResolver",
    "PlacedObject",
    "Placement",
    "Point",
    "Prediction",
    "Prompt",
    "RemoteResolver",
    "Resolver",
    "ResolverError",
    "RuleConflictError",
    "RuleRegistry",
    "ScreenObject",
    "SlotList",
    "TemplateError",
    "TextualizationRule",
    "assign_entity_cluster",
    "bbox_center",
    "build_cluster_encoding",
    "build_conversational_prompt",
    "build_onscreen_prompt",
    "collect_objects",
    "dbscan_cluster",
    "default_registry",
    "encode_clusters",
    "encode_screen",
    "evaluate_dataset",
    "expand_template",
    "expansion_count",
    "generate_datapoints",
    "group_levels",
    "load_dataset",
    "load_rules",
    "load_templates",
    "parse_dataset",
    "parse_prediction",
    "prompt_for_datapoint",
    "rect_distance",
    "render_parse",
    "save_dataset",
    "score",
    "shuffle_entities",
    "sort_objects",
    "textualize_entity",
]
