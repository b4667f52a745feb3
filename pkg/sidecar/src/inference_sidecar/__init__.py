"""HTTP inference sidecar: multilingual embeddings and NLI entailment.

Stub mode serves recorded contract fixtures verbatim plus a deterministic
fallback, so the service (and everything that talks to it) is testable with
no model downloads.  Real mode loads transformer models lazily.
"""

from .engines import FixtureStore, ModelNotLoadedError, RealEngine, StubEngine
from .service import create_app, engine_from_env

__version__ = "0.1.0"

__all__ = [
    "FixtureStore",
    "ModelNotLoadedError",
    "RealEngine",
    "StubEngine",
    "create_app",
    "engine_from_env",
    "__version__",
]
