"""
Test Suite for Samba Insight

Contains unit and integration tests for the data pipeline.
"""
