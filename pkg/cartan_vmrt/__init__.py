"""
Basic information about this package
"""

__version__ = '0.9.0'
