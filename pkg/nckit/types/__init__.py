"""Result and report types."""
