"""Tests for the reaction model."""
