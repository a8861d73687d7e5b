"""Polaron master-equation simulator for a biased double quantum dot."""
