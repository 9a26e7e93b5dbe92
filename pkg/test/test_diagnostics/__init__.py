"""Tests for functionals, writers and the ODE oracle."""
