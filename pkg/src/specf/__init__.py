"""Community-contextual anomaly detection on attributed graphs.

A node signal is low-pass filtered in the graph Fourier basis of a
community-expanded Laplacian; nodes that the filter moves by much more than
the rest of their community are reported as anomalous.

Main entry points
-----------------
run_specf
    Detect anomalies given a graph, a signal and a partition.
make_benchmark
    Planted-partition graph with a community-coherent signal and injected
    anomalies.
roc_auc, average_precision, prf1
    Scoring against ground truth.
windowed_detection
    Sensor time series adapter (correlation graph + per-window DTW signals).
"""

from .detector import (
    DetectionConfig,
    DetectionReport,
    abnormality,
    community_threshold,
    flag_anomalies,
    prepare,
    run_specf,
)
from .errors import ConvergenceError, DisconnectedGraphError, InputError, SpecfError
from .evaluation import average_precision, evaluate, pr_curve, prf1, roc_auc, roc_curve
from .generators import (
    AnomalySpec,
    PlantedGraphSpec,
    community_base_signal,
    generate_normal_signal,
    generate_planted_graph,
    inject_anomalies,
    make_benchmark,
)
from .graph import Graph, Partition, adjacency_matrix, connected, expanded_matrix, laplacian
from .spectral import (
    FilterResponse,
    Spectrum,
    apply_filter,
    eig_sym,
    estimate_k_eigengap,
    fit_polynomial_filter,
    gft,
    ideal_lowpass,
    igft,
)
from .timeseries import MultiSeries, WindowPlan, correlation_graph, dtw_distance, window_signals, windowed_detection

__version__ = "0.1.0"
