__version__ = "0.1.0"
__schema_version__ = "1"
