"""
Tests for the bundled models and example corpus.
"""
