"""Shuttled fault-tolerant ancilla networks for CSS codes on a line of qubits."""

from .anneal import AnnealConfig, anneal, anneal_chains
from .gf2codes import BitMatrix, CssCode, build_bch127, build_golay, get_code, standard_form
from .schedule import LogicalNetwork, build_network, latin_rectangle
from .shuttle import distance_stats, initial_layout, shuttle_transform

__version__ = "0.1.0"
