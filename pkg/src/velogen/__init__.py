"""velogen: procedural parametric bicycle designs, rendered and optimized
against embedding-space targets."""

__version__ = "0.1.0"
