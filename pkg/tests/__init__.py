"""Test package for clstrata."""
