"""User-side privacy layer for black-box machine translation.

Substitutes words in sensitive text before it is sent to an untrusted
translator and restores them in the translated output, so the engine only
ever sees the masked text.
"""

__version__ = "0.1.0"
