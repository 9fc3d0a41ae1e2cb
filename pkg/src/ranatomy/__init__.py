"""ranatomy: a static-analysis census for R code.

Parses R sources, builds per-file dataflow graphs, counts usage
characteristics (assignments, data access, conditionals, loops, function
definitions and calls, package loading, values, variables, comments), and
statistically compares feature distributions between two corpora.
"""

__version__ = "0.1.0"

SCHEMA_VERSION = 1
