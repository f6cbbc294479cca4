"""
Tests for the cartan_vmrt package
"""
