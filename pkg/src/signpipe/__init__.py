"""English text to ASL gloss and stitched 3D sign animation."""

__version__ = "0.1.0"
