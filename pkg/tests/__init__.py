"""Test package marker for reduction-core."""
