"""Fully augmented link diagrams on closed orientable surfaces of genus >= 2.

Validation, augmentation/filling transforms, bowtie decompositions with exact
counting laws, ideal-triangulation export with volume bounds, link-family
constructions, and a mapping-class certificate engine.
"""

__version__ = "0.1.0"
