"""Tests for the ts-sphinx package."""
