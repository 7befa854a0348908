"""Tests for the foldcast library and CLI."""
