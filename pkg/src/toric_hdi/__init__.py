"""Sheaf cohomology and higher direct images on smooth complete toric varieties."""
