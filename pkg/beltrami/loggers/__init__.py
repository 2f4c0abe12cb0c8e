"""
Beltrami loggers package.
"""
