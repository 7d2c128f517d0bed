"""Bimodal forensic document analysis.

Two independent evidence routes, a stylome classifier over text and a
direction-histogram matcher over online signatures, are mapped onto a
common possibilistic [0, 1] scale and fused at the score level.  All
pipeline stages run in time linear in the input size.
"""

__version__ = "0.1.0"
