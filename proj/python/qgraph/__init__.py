"""Eigenmodes, localization and wave propagation on metric graphs."""

import json

from ._core import (
    Arc,
    Eigenpair,
    LocalizationReport,
    MetricGraph,
    Mode,
    QGraphError,
    ResonanceSpec,
    Vertex,
    certify_nonexistence,
    check_shape,
    construct_mode,
    edge_norm,
    extract_modes,
    generate_buffon,
    inner_product,
    load_g14,
    localization_report,
    merge_degree_two,
    mode_residual,
    read_graph,
    run_cli,
    scan_spectrum,
    simulate_pulse,
    smallest_singular_value,
    tune_lengths,
    write_graph,
)

__version__ = "0.1.0"


def graph_from_dict(doc):
    return MetricGraph.from_json(json.dumps(doc))


def graph_to_dict(graph):
    return json.loads(graph.to_json())
