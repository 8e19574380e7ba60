"""Query-focused extractive answer summarization for technical Q&A threads."""

from .corpus import (
    AnnotationUnit,
    Answer,
    AnswerSentence,
    BenchmarkEntry,
    TechnicalQuery,
    build_unit,
    clean_sentence,
    load_benchmark,
    save_benchmark,
    split_sentences,
)
from .centrality import TextRankConfig, rank_by_centrality
from .pipeline import PipelineConfig, SummaryResult, summarize, summarize_benchmark
from .redundancy import RedundancyConfig, greedy_select, is_redundant
from .rouge import RougeReport, RougeScore, evaluate_benchmark, rouge_l, rouge_n
from .scoring import (
    LexicalUsefulnessScorer,
    RemoteScorer,
    TfidfEmbedder,
    cosine_similarity,
    lexical_usefulness,
    tfidf_embed,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationUnit",
    "Answer",
    "AnswerSentence",
    "BenchmarkEntry",
    "TechnicalQuery",
    "build_unit",
    "clean_sentence",
    "load_benchmark",
    "save_benchmark",
    "split_sentences",
    "TextRankConfig",
    "rank_by_centrality",
    "PipelineConfig",
    "SummaryResult",
    "summarize",
    "summarize_benchmark",
    "RedundancyConfig",
    "greedy_select",
    "is_redundant",
    "RougeReport",
    "RougeScore",
    "evaluate_benchmark",
    "rouge_l",
    "rouge_n",
    "LexicalUsefulnessScorer",
    "RemoteScorer",
    "TfidfEmbedder",
    "cosine_similarity",
    "lexical_usefulness",
    "tfidf_embed",
    "__version__",
]
