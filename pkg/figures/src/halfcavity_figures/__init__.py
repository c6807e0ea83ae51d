"""Figure scripts for halfcavity CSV outputs.

Each fig* module renders one static image from the delimited files the
`halfcavity` CLI writes; the CSV schema line is validated before anything
is drawn, and rendering is deterministic for a given input.
"""

__version__ = "0.1.0"
