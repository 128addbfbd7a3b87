"""Settings, logging and errors shared across the package."""
