"""prscrub: dataset refinement for pull-request description corpora."""

__version__ = "0.1.0"
