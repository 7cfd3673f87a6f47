"""Route modules for the application."""
