"""embed-exporter: bridge pretrained sentence encoders to the VEC file format."""

__version__ = "0.1.0"
