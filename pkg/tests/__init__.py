"""
Test suite for deformae.
"""
