"""Command handlers behind the ``colav`` CLI."""
