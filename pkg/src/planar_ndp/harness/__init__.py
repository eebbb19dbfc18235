"""Baselines, exact oracles, generators, validation and serialization."""
