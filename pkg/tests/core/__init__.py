"""
Tests for the deformation engine.
"""
