"""
Utility functions: exact linear algebra and the JSON codec.
"""

from . import linalg
from .codec import file_digest, form_to_config, parse_form, read_json

__all__ = [
    'linalg',
    'file_digest',
    'form_to_config',
    'parse_form',
    'read_json'
]
