"""Tests for the verification suites."""
