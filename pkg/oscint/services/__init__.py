"""Service helpers grouped by domain."""
