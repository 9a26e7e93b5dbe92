"""Tests for grids, operators and coefficients."""
