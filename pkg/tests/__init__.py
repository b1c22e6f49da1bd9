"""Test package for Photidy application."""
