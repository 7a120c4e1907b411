"""
Test package for minorforge.
"""
