from src.callbacks.base import CallbackList, Callback
from src.callbacks.logging import Logging
from src.callbacks.json_report import JsonReport

__all__ = [
    'Callback',
    'CallbackList',
    'Logging',
    'JsonReport',
]
