"""
Tests for the crane shortcut toolkit
"""
