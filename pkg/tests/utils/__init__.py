"""
Tests for exact linear algebra and the JSON codec.
"""
