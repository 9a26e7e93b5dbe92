"""Tests for epidiff package."""
