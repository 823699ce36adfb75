"""
Classifiers built from solved duals, one-versus-one aggregation and
model files.
"""

from src.model.binary import BinaryModel, build_binary, decision_value, predict_binary
from src.model.ovo import OvoModel, accuracy, predict_ovo, train_ovo
from src.model.serialization import deserialize_model, load_model, save_model, serialize_model

__all__ = [
    'BinaryModel', 'build_binary', 'decision_value', 'predict_binary',
    'OvoModel', 'accuracy', 'predict_ovo', 'train_ovo',
    'serialize_model', 'deserialize_model', 'save_model', 'load_model',
]
