"""Toolkit-wide error types shared across modules."""


class UnsupportedConstruct(ValueError):
    """A construct the toolkit deliberately rejects rather than mishandles:
    unbounded quantifiers, ring quantifiers, sum-of-squares sequents under a
    pc_rad target, radical elimination outside GF(p), and the like."""
