"""augtree: deterministic data augmentation for low-resource dependency treebanks."""

from .core import (
    AugConfig,
    RngStream,
    Task,
    Technique,
    cap_count,
    derive_stream,
    is_viable,
    num_augmented,
    select_token_indices,
)
from .char_level import CharVocab, apply_char_noise, build_char_vocab
from .errors import AugtreeError, ConfigError, EmbeddingError, ParseError, TreeError
from .pipeline import AugResources, ProvenanceRecord, augment_corpus, augment_sentence
from .syntactic import (
    LoiProfile,
    NonceIndex,
    builtin_profile,
    build_nonce_index,
    crop,
    merge_fixed_expressions,
    nonce,
    rotate,
)
from .token_level import (
    EmbeddingTable,
    cosine,
    knn,
    load_embeddings,
    random_word_delete,
    random_word_swap,
    synonym_replace,
)
from .treebank import (
    DepTree,
    MwtRange,
    Sentence,
    SrlInfo,
    Token,
    build_tree,
    parse_conll09,
    parse_conllu,
    reindex,
    serialize_conll09,
    serialize_conllu,
    subtree_token_ids,
)

__version__ = "0.1.0"

__all__ = [
    "AugConfig", "AugResources", "AugtreeError", "CharVocab", "ConfigError",
    "DepTree", "EmbeddingError", "EmbeddingTable", "LoiProfile", "MwtRange",
    "NonceIndex", "ParseError", "ProvenanceRecord", "RngStream", "Sentence",
    "SrlInfo", "Task", "Technique", "Token", "TreeError", "apply_char_noise",
    "augment_corpus", "augment_sentence", "build_char_vocab", "build_nonce_index",
    "build_tree", "builtin_profile", "cap_count", "cosine", "crop",
    "derive_stream", "is_viable", "knn", "load_embeddings",
    "merge_fixed_expressions", "nonce", "num_augmented", "parse_conll09",
    "parse_conllu", "random_word_delete", "random_word_swap", "reindex",
    "rotate", "select_token_indices", "serialize_conll09", "serialize_conllu",
    "subtree_token_ids", "synonym_replace",
]
