"""Test fixtures package."""

