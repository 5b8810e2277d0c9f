"""Variant-literature indexing pipeline.

Extracts genetic-variant mentions from PubMed-style title/abstract text,
normalizes them to canonical identities across DNA, RNA, and protein
representations (and across genome assemblies), and maintains a
persistent inverted index from variant identity to article postings.
"""

__version__ = "0.1.0"
