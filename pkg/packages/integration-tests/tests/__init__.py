"""Acceptance tests for the Sagnac estimation toolkit."""
