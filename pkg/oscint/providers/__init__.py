"""Coefficient providers for the bundled symmetric multistep methods."""
