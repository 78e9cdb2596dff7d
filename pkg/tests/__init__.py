"""
Test suite for the xmoncoupler coupler model.
"""
