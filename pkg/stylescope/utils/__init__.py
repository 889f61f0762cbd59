"""Shared helpers: logging, seeding, parallelism, tables and validation."""
