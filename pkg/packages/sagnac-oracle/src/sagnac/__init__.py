"""Sagnac - quantum estimation limits for a trapped-particle Sagnac interferometer.

This is a namespace package that allows multiple sagnac-* packages
to share the same 'sagnac' namespace.
"""

__path__ = __import__("pkgutil").extend_path(__path__, __name__)
