"""Computational workbench for the norm-trace function field tower."""
