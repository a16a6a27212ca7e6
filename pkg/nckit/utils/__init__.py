"""File formats and random generators."""
