"""Grid, job and policy models."""
