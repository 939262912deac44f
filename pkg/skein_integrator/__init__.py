"""Singular link invariants, their local integrability conditions and integration."""
