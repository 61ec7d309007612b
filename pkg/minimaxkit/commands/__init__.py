"""
Command-line commands package.
"""
