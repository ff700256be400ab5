"""Bundled scenario library (JSON documents read through importlib.resources)."""
