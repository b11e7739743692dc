"""pastewatch: just-in-time Extract Method recommendations for pasted Java."""

from .tokens import LexError, Token, tokenize
from .syntax import (
    CodeFragment,
    FragmentParse,
    MethodDecl,
    ParseError,
    Stmt,
    SyntaxTree,
    fragment_at,
    methods_of,
    nesting_depth,
    parse_compilation_unit,
    parse_fragment,
)
from .dataflow import live_in, live_out
from .clones import DuplicateMatch, find_duplicates, is_substring_match, normalize, similarity, token_bag
from .metrics import CATALOG, CATALOG_VERSION, extract_features
from .candidates import Candidate, ScoreWeights, enumerate_candidates, is_extractable
from .dataset import DatasetRecord, ingest_positives, mine_negatives
from .extraction import ExtractionPlan, PlanError, TextEdit, apply_edits, plan_extraction
from .learning import (
    EvalReport,
    Model,
    bootstrap_eval,
    evaluate,
    load_model,
    pr_auc,
    predict_proba,
    save_model,
    train_bayes,
    train_forest,
    train_logistic,
)
from .engine import Engine, EngineConfig, PasteEvent, load_config

__all__ = [name for name in dir() if not name.startswith("_")]
