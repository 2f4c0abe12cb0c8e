"""
Beltrami numerical library package.
"""
