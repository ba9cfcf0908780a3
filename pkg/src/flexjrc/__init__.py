"""Flexible hybrid beamforming with RF-chain selection for dual-function radar-communication MIMO."""

__version__ = "0.1.0"
