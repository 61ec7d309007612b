"""
Tests for the minimax toolkit.
"""
