"""Tests for darboux."""
