"""Shipped run configurations, loaded with ``epidiff.config.load_preset``."""
