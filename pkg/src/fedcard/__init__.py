"""fedcard: a desk-scale laboratory for cost-based federated SPARQL planning.

Builds per-source statistics from N-Triples data, runs the cardinality
estimators of five cost-based federation engines, measures their errors
against a brute-force oracle, classifies greedy left-deep plans, and
correlates the error metrics with supplied runtimes.
"""

__version__ = "0.1.0"
