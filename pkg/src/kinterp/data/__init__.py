"""Checked-in suite baselines (regenerate with tools/update_baselines.py)."""
