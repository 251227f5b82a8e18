"""Receiver-side evaluation: ITR, threshold detection and bit-error probabilities."""
