"""starkverify: exact verification of Stark, Popescu and Burns conjecture data."""

__version__ = "0.1.0"
