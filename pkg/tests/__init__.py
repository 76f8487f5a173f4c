"""Tests for the gencurv package."""
