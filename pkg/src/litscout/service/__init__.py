from .app import create_app, create_app_from_config
from .state import Bundle, SessionStore, build_bundle, load_bundle

__all__ = [
    "Bundle",
    "SessionStore",
    "build_bundle",
    "create_app",
    "create_app_from_config",
    "load_bundle",
]
