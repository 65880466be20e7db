"""Knowledge bases and per-node semantic encode/decode capability vectors."""

from __future__ import annotations

from dataclasses import dataclass, field

COMM_SAT = "CommSat"
AI_SAT = "AISat"
TERMINAL = "Terminal"
NODE_KINDS = (COMM_SAT, AI_SAT, TERMINAL)

ENCODER = "encoder"
DECODER = "decoder"
ROLES = (ENCODER, DECODER)


@dataclass(frozen=True)
class KnowledgeBaseCatalog:
    """Ordered registry of the knowledge bases deployable in the network.

    KB ids are the positions 0..size-1; labels are opaque descriptions.
    """

    labels: tuple[str, ...] = ("kb0", "kb1", "kb2")

    def __post_init__(self):
        if len(self.labels) == 0:
            raise ValueError("catalog must declare at least one knowledge base")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("knowledge base labels must be unique")

    @property
    def size(self) -> int:
        return len(self.labels)

    def ids(self) -> range:
        return range(len(self.labels))


@dataclass
class NodeSpec:
    """A network node with encoder/decoder capability vectors.

    ``encoder_caps[k]`` / ``decoder_caps[k]`` count the deployed encoder /
    decoder models for KB ``k``.  A node is GSC-capable when any entry is
    >= 1; plain communication satellites carry all-zero vectors and act as
    relays only.
    """

    id: str
    kind: str
    encoder_caps: tuple[int, ...] = field(default_factory=tuple)
    decoder_caps: tuple[int, ...] = field(default_factory=tuple)
    compute_capacity: int = 0

    def __post_init__(self):
        if self.kind not in NODE_KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        self.encoder_caps = tuple(self.encoder_caps)
        self.decoder_caps = tuple(self.decoder_caps)
        if len(self.encoder_caps) != len(self.decoder_caps):
            raise ValueError(f"node {self.id}: capability vectors differ in length")
        if any(v < 0 for v in self.encoder_caps + self.decoder_caps):
            raise ValueError(f"node {self.id}: capability entries must be >= 0")
        if self.compute_capacity < 0:
            raise ValueError(f"node {self.id}: compute capacity must be >= 0")
        if self.kind == COMM_SAT and self.is_gsc_capable():
            raise ValueError(f"node {self.id}: communication satellites carry no models")

    def is_gsc_capable(self) -> bool:
        return any(v >= 1 for v in self.encoder_caps) or any(
            v >= 1 for v in self.decoder_caps
        )

    def can_encode(self, kb: int) -> bool:
        return kb < len(self.encoder_caps) and self.encoder_caps[kb] >= 1

    def can_decode(self, kb: int) -> bool:
        return kb < len(self.decoder_caps) and self.decoder_caps[kb] >= 1

    def model_count(self) -> int:
        return sum(self.encoder_caps) + sum(self.decoder_caps)


def zero_caps(catalog: KnowledgeBaseCatalog) -> tuple[int, ...]:
    return (0,) * catalog.size
