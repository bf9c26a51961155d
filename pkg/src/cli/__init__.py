"""Command-line harness: solve, verify, sweep, gen and bounds."""
