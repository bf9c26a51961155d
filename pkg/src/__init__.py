"""Fair multi-resource allocation toolkit for Leontief agents."""

__all__ = []
