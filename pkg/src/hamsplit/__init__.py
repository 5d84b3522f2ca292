"""Uneven ham-sandwich splittings of measures by hyperplanes."""
