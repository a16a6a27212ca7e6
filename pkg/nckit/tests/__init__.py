"""Package-level tests for nckit."""
