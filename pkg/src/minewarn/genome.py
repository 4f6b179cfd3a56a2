"""Flat real-vector encoding of the network parameters.

The gene order is fixed: input weights row by row (all weights into the first
hidden neuron, then the second, and so on), then the hidden biases, then the
output weights row by row, then the output biases. Every operation here
round-trips bit-exactly because encoding is pure reshaping.
"""

from __future__ import annotations

import numpy as np

from .network import NetworkParams, NetworkShape

BLOCKS = ("input_weights", "hidden_bias", "output_weights", "output_bias")


def chromosome_length(shape: NetworkShape) -> int:
    """Gene count for a shape: (n_inputs + 1) * n_hidden + (n_hidden + 1) * n_outputs."""
    n, q, m = shape.n_inputs, shape.n_hidden, shape.n_outputs
    return (n + 1) * q + (q + 1) * m


def encode(params: NetworkParams) -> np.ndarray:
    """Flatten parameters into a chromosome vector."""
    genes = np.concatenate([
        params.input_weights.ravel(),
        params.hidden_bias,
        params.output_weights.ravel(),
        params.output_bias,
    ])
    if not np.all(np.isfinite(genes)):
        bad = int(np.flatnonzero(~np.isfinite(genes))[0])
        raise ValueError(f"non-finite parameter at gene index {bad}")
    return genes


def decode(genes: np.ndarray, shape: NetworkShape) -> NetworkParams:
    """Rebuild parameters from a chromosome vector."""
    genes = np.asarray(genes, dtype=np.float64)
    expected = chromosome_length(shape)
    if genes.shape != (expected,):
        raise ValueError(
            f"chromosome length mismatch: shape "
            f"({shape.n_inputs}, {shape.n_hidden}, {shape.n_outputs}) needs "
            f"{expected} genes, got {genes.size}"
        )
    n, q, m = shape.n_inputs, shape.n_hidden, shape.n_outputs
    offset = 0
    input_weights = genes[offset:offset + q * n].reshape(q, n)
    offset += q * n
    hidden_bias = genes[offset:offset + q]
    offset += q
    output_weights = genes[offset:offset + m * q].reshape(m, q)
    offset += m * q
    output_bias = genes[offset:offset + m]
    return NetworkParams(input_weights.copy(), hidden_bias.copy(),
                         output_weights.copy(), output_bias.copy())


def gene_layout(shape: NetworkShape) -> list[tuple[int, str, int, int]]:
    """Table mapping gene index to (block, row, column).

    Bias blocks are vectors, so their column is always 0. The table documents
    the stable flattening order used by :func:`encode` and :func:`decode`.
    """
    n, q, m = shape.n_inputs, shape.n_hidden, shape.n_outputs
    table: list[tuple[int, str, int, int]] = []
    idx = 0
    for j in range(q):
        for i in range(n):
            table.append((idx, "input_weights", j, i))
            idx += 1
    for j in range(q):
        table.append((idx, "hidden_bias", j, 0))
        idx += 1
    for k in range(m):
        for j in range(q):
            table.append((idx, "output_weights", k, j))
            idx += 1
    for k in range(m):
        table.append((idx, "output_bias", k, 0))
        idx += 1
    return table
