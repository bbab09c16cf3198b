"""
Network-coding primitives: GF(2^M) arithmetic, packets and RLNC operations.
"""

from .galois import (
    DEFAULT_DEGREE,
    FieldMismatchError,
    GaloisField,
    GfElement,
    GfMatrix,
    SingularMatrixError,
    clmul_reference,
    full_rank_bound,
    gf_add,
    gf_inv,
    gf_mul,
    matmul,
    rank,
    solve,
)
from .packet import Buffer, FlowSpec, Packet, StampGroup
from .rlnc import (
    DecodeError,
    EmptyStampError,
    MissingSourceError,
    RankDeficientError,
    anonymity_index,
    encode_source,
    payload_consistent,
    recombine,
    target_terminals,
    terminal_set,
    try_decode,
)

__all__ = [
    "DEFAULT_DEGREE",
    "FieldMismatchError",
    "GaloisField",
    "GfElement",
    "GfMatrix",
    "SingularMatrixError",
    "clmul_reference",
    "full_rank_bound",
    "gf_add",
    "gf_inv",
    "gf_mul",
    "matmul",
    "rank",
    "solve",
    "Buffer",
    "FlowSpec",
    "Packet",
    "StampGroup",
    "DecodeError",
    "EmptyStampError",
    "MissingSourceError",
    "RankDeficientError",
    "anonymity_index",
    "encode_source",
    "payload_consistent",
    "recombine",
    "target_terminals",
    "terminal_set",
    "try_decode",
]
