"""Quantum and classical graph positional encodings.

Quantum-walk pair encodings, Ising ground-state correlation encodings and
their closed-form covariance, classical baselines (RRWP/RWSE/Laplacian/SPD),
GD-WL expressivity tooling with strongly-regular-graph fixtures, synthetic
dataset generators, randomization baselines and a toy quantum-attention
layer with spectral parameter-shift gradients.
"""

from .attention import (
    AttentionConfig,
    gtqc_layer_forward,
    quantum_attention_matrix,
    random_heads,
    spectral_gradient,
)
from .classical import laplacian_eigvecs, rrwp, rwse, spd_matrix
from .datasets import (
    LabeledDataset,
    config_model_randomize,
    gen_cladder,
    gen_spattern,
    gnm_randomize,
    load_dataset,
    permute_features,
    save_dataset,
    strongly_correlated_graph,
)
from .gdwl import (
    ColorPartition,
    DistanceProvider,
    NotStronglyRegularError,
    encoding_distance,
    gdwl_distinguish,
    gdwl_refine,
    graphs_isomorphic,
    srg_parameters,
    srg_power_identity_check,
)
from .graph import Graph, GraphError, laplacian, load_graph, permute, save_graph
from .groundstate import (
    GroundStateManifold,
    ManifoldCapError,
    gs_correlation_matrix,
    gs_eigvec_pe,
    ground_state_manifold,
    ising_energy,
)
from .ising_closed_form import (
    IsingPEParams,
    SingularFactorError,
    closed_form_covariance,
    closed_form_pe_tensor,
)
from .petensor import PETensor, load_petensor, save_petensor
from .quantum import (
    EvolutionParams,
    QuantumState,
    SimulationError,
    build_graph_state,
    correlator_vector,
    occupation_covariance_bruteforce,
    pauli_expectation,
)
from .subspace import (
    SubspaceOperator,
    cqrw_probabilities,
    qirw_discrete,
    qrw_pe_tensor,
    sample_times,
    xy_subspace_hamiltonian,
)

__version__ = "0.1.0"
