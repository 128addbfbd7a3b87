"""Shared constants and sampling helpers."""
