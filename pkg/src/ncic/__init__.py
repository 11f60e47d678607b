"""Network codes with link errors and index codes with side-information errors."""

__version__ = "0.1.0"
