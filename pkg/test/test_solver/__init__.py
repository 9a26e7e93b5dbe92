"""Tests for the linear, steady and time-stepping solvers."""
