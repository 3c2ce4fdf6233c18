"""Finite frames, monoidal posets, sheaves on finite sites and categorified locales."""

__version__ = "0.1.0"
