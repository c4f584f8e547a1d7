"""FastAPI service wrapping the core verification package."""
