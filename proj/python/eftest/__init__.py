"""Self-normalized relevance tests for the covariance eigenstructure of
functional samples.

The heavy lifting lives in the compiled extension; this package re-exports
its public names. Tests return plain dicts; samples and null tables are
opaque handles constructed by :func:`make_sample` / :func:`simulate_table`.
"""

from ._eftest import (
    CurveSample,
    DataError,
    NumericError,
    QuantileTable,
    bonferroni,
    center,
    dhat_distance,
    eigenfunction,
    eigenvalues,
    estimate_zeta,
    holm,
    make_sample,
    p_value,
    phase_to_distance,
    quantile,
    simulate_sample,
    simulate_table,
    test_eigenfunction,
    test_eigenvalue,
    test_lrv_plugin,
    vhat,
)

__all__ = [
    "CurveSample",
    "DataError",
    "NumericError",
    "QuantileTable",
    "bonferroni",
    "center",
    "dhat_distance",
    "eigenfunction",
    "eigenvalues",
    "estimate_zeta",
    "holm",
    "make_sample",
    "p_value",
    "phase_to_distance",
    "quantile",
    "simulate_sample",
    "simulate_table",
    "test_eigenfunction",
    "test_eigenvalue",
    "test_lrv_plugin",
    "vhat",
]

__version__ = "0.1.0"
