"""
Minimax Kit package initialization.
"""
