"""Package version of the multiband CSMA/CA simulator."""

# hatch reads the version from here.
__version__ = "0.1.0"
