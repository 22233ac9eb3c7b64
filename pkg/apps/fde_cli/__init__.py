"""
fde-sic command-line application.
"""
