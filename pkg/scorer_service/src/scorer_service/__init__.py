"""Model-backed scorer service speaking the answersum wire protocol."""

from .models import (
    ContrastiveEmbedder,
    UsefulnessClassifier,
    load_artifact,
    save_artifact,
)
from .training import (
    EmbedderHyper,
    UsefulnessExample,
    UsefulnessHyper,
    contrastive_loss,
    separation_rate,
    split_train_test,
    train_embedder,
    train_usefulness,
    tune_threshold,
)
from .service import ModelHolder, create_app, serve

__version__ = "0.1.0"
