"""Tests for the Rashba ring solver."""
