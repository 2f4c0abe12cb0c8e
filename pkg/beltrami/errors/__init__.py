"""
Beltrami errors package.
"""
