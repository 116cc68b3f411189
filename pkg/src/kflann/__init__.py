"""KFLANN clustering with vigilance/tolerance matching and centroid-stable training."""
from .dataset import Dataset, DatasetError, Pattern, describe, load_csv, load_manifest, write_csv
from .preprocess import FeatureStats, NormalizationSpec, fit_stats, minmax, normalize, zscore
from .tolerance import ToleranceVector, tolerance_manual, tolerance_maxmin, tolerance_stddev
from .network import (KflannModel, KflannParams, OutputNode, TuningTrace, find_matches, fit,
                      match_score, parse_vigilance, tune_tolerance, vigilance_from_counts, winner)

__version__ = "0.1.0"
