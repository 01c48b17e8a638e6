"""Generators for experiment function families, the fnspec mini-language,
and the family file format.

fnspec grammar (the dimension n always comes from context):

    dict:<i>                  the i-th dictator, (-1)^{x_i}
    parity:<hex-mask>         the character χ_α with α given as lowercase hex
    table:<hex>               explicit truth table (see table_to_hex)
    random:<seed>             uniformly random folded function
    noisydict:<i>:<rho>:<seed>  dictator with half-table noise, refolded
    maj                       majority (n odd)

Family files are JSON objects with fields n, k, edges (list of vertex lists)
and members: either the string "all=<fnspec>" or a map from member labels
("v1".."vk" for vertices, "e1,2"-style for edges) to fnspecs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import SpecParseError
from .functions import (
    BitVector,
    BooleanFunction,
    check_dimension,
    is_folded,
    make_folded,
    refold,
    require_folded,
    table_from_hex,
)
from .gowers import IndexedFamily
from .rng import derive_rng, seed_key
from .testers import FunctionFamily, Hypergraph, edge_label, vertex_label


def dictator(n: int, i: int) -> BooleanFunction:
    """f(x) = (-1)^{x_i}."""
    check_dimension(n)
    if not 1 <= i <= n:
        raise ValueError(f"coordinate {i} out of range for n={n}")
    bits = (np.arange(1 << n) >> (i - 1)) & 1
    return BooleanFunction(n, 1 - 2 * bits.astype(np.int8))


def parity(n: int, alpha) -> BooleanFunction:
    """The character χ_α(x) = (-1)^{Σ_{i in α} x_i}; α = 0 gives constant +1."""
    check_dimension(n)
    if isinstance(alpha, BitVector):
        if alpha.n != n:
            raise ValueError(f"dimension mismatch: {alpha.n} vs {n}")
        mask = alpha.bits
    elif isinstance(alpha, (set, frozenset, list, tuple)):
        mask = 0
        for i in alpha:
            if not 1 <= int(i) <= n:
                raise ValueError(f"coordinate {i} out of range for n={n}")
            mask |= 1 << (int(i) - 1)
    else:
        mask = int(alpha)
        if not 0 <= mask < 1 << n:
            raise ValueError(f"mask {mask} out of range for n={n}")
    table = np.ones(1 << n, dtype=np.int8)
    for b in range(n):
        if mask >> b & 1:
            table = table * (1 - 2 * ((np.arange(1 << n) >> b) & 1).astype(np.int8))
    return BooleanFunction(n, table)


def random_folded(n: int, seed) -> BooleanFunction:
    """Uniform over the 2^{2^{n-1}} folded functions; deterministic per seed."""
    check_dimension(n)
    rng = derive_rng(*seed_key(seed))
    half = 1 - 2 * rng.integers(0, 2, size=1 << (n - 1)).astype(np.int8)
    return make_folded(n, half)


def noisy_dictator(n: int, i: int, rho: float, seed) -> BooleanFunction:
    """Dictator i with each half-table sign flipped with probability rho,
    then refolded (so the mean stays exactly 0)."""
    if not 0.0 <= rho <= 0.5:
        raise ValueError(f"flip probability must be in [0, 1/2], got {rho}")
    base = dictator(n, i)
    half = base.table[1::2].copy()
    rng = derive_rng(*seed_key(seed))
    flips = rng.random(half.size) < rho
    half[flips] *= -1
    return make_folded(n, half)


def junta(n: int, coords, inner: BooleanFunction) -> BooleanFunction:
    """Embed ``inner`` on the listed coordinates; all others are irrelevant."""
    check_dimension(n)
    coords = [int(c) for c in coords]
    if len(set(coords)) != len(coords):
        raise ValueError("coordinates must be distinct")
    for c in coords:
        if not 1 <= c <= n:
            raise ValueError(f"coordinate {c} out of range for n={n}")
    if inner.n != len(coords):
        raise ValueError(
            f"inner function has {inner.n} variables, expected {len(coords)}"
        )
    idx = np.arange(1 << n)
    inner_idx = np.zeros(1 << n, dtype=np.int64)
    for pos, c in enumerate(coords):
        inner_idx |= ((idx >> (c - 1)) & 1) << pos
    return BooleanFunction(n, inner.table[inner_idx])


def majority(n: int) -> BooleanFunction:
    """+1 when strictly more coordinates are 0 than 1; n must be odd."""
    check_dimension(n)
    if n % 2 == 0:
        raise ValueError(f"majority needs odd n, got {n}")
    weights = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        weights = np.concatenate([weights, weights + 1])
    return BooleanFunction(n, np.where(weights * 2 < n, 1, -1).astype(np.int8))


# ---------------------------------------------------------------------------
# fnspec parsing
# ---------------------------------------------------------------------------


def parse_fnspec(spec: str, n: int) -> BooleanFunction:
    """Build the function denoted by a spec string, on n variables."""
    parts = spec.strip().split(":")
    kind = parts[0]
    try:
        if kind == "dict" and len(parts) == 2:
            return dictator(n, int(parts[1]))
        if kind == "parity" and len(parts) == 2:
            if not parts[1] or not all(c in "0123456789abcdef" for c in parts[1]):
                raise SpecParseError(f"parity mask must be lowercase hex: {spec!r}")
            return parity(n, int(parts[1], 16))
        if kind == "table" and len(parts) == 2:
            return table_from_hex(n, parts[1])
        if kind == "random" and len(parts) == 2:
            return random_folded(n, int(parts[1]))
        if kind == "noisydict" and len(parts) == 4:
            return noisy_dictator(n, int(parts[1]), float(parts[2]), int(parts[3]))
        if kind == "maj" and len(parts) == 1:
            return majority(n)
    except SpecParseError:
        raise
    except ValueError as exc:
        raise SpecParseError(f"bad fnspec {spec!r}: {exc}") from exc
    raise SpecParseError(f"unrecognized fnspec {spec!r}")


def _resolve_member(spec: str, n: int, fold: str) -> BooleanFunction:
    f = parse_fnspec(spec, n)
    if fold == "refold":
        return refold(f)
    if fold == "strict":
        require_folded(f, f"member {spec!r}")
        return f
    raise ValueError(f"unknown fold policy {fold!r}")


def build_family(
    hypergraph: Hypergraph,
    n: int,
    members,
    *,
    fold: str = "refold",
) -> FunctionFamily:
    """Assemble a FunctionFamily from fnspecs.

    ``members`` is either "all=<fnspec>" (one spec for every member) or a
    mapping from member labels to fnspecs.  The default fold policy refolds
    every parsed member (a no-op for already-folded functions); "strict"
    rejects unfolded members instead.
    """
    labels = [vertex_label(i) for i in range(1, hypergraph.k + 1)]
    labels += [edge_label(e) for e in hypergraph.edges]
    if isinstance(members, str):
        text = members.strip()
        if not text.startswith("all="):
            raise SpecParseError(
                f"member string must look like 'all=<fnspec>', got {members!r}"
            )
        spec_map = {label: text[len("all=") :] for label in labels}
    else:
        spec_map = dict(members)
        missing = [label for label in labels if label not in spec_map]
        extra = [label for label in spec_map if label not in labels]
        if missing or extra:
            raise SpecParseError(
                f"member labels mismatch: missing {missing}, unexpected {extra}"
            )
    resolved = {
        label: _resolve_member(spec_map[label], n, fold) for label in labels
    }
    k = hypergraph.k
    return FunctionFamily(
        hypergraph,
        [resolved[vertex_label(i)] for i in range(1, k + 1)],
        [resolved[edge_label(e)] for e in hypergraph.edges],
    )


def random_family(hypergraph: Hypergraph, n: int, seed) -> FunctionFamily:
    """I.i.d. uniformly random folded members; member j uses stream (seed, j)."""
    t = hypergraph.t
    fns = [
        make_folded(
            n,
            1
            - 2
            * derive_rng(*seed_key(seed), j)
            .integers(0, 2, size=1 << (n - 1))
            .astype(np.int8),
        )
        for j in range(t)
    ]
    k = hypergraph.k
    return FunctionFamily(hypergraph, fns[:k], fns[k:])


def load_family(path) -> FunctionFamily:
    """Read a family file (JSON: n, k, edges, members)."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecParseError(f"cannot read family file {path}: {exc}") from exc
    try:
        n = int(doc["n"])
        k = int(doc["k"])
        edges = doc["edges"]
        members = doc["members"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"family file {path} missing field: {exc}") from exc
    hypergraph = Hypergraph(
        k, [frozenset(e) for e in edges], bool(doc.get("allow_singletons", False))
    )
    return build_family(hypergraph, n, members, fold=str(doc.get("fold", "refold")))


# ---------------------------------------------------------------------------
# Planted instances for the influential-pair decoder
# ---------------------------------------------------------------------------


def planted_decoder_family(
    d: int, n: int, coord: int, rho: float, seed
) -> tuple[IndexedFamily, tuple[int, int]]:
    """An indexed family with one noisy dictator planted at two slots.

    Two subset masks (chosen from stream (seed, 0)) share the same noisy
    dictator at ``coord``; every other member is an independent random
    folded function.  Returns the family and the planted mask pair.
    """
    chooser = derive_rng(*seed_key(seed), 0)
    planted = sorted(int(m) for m in chooser.permutation(1 << d)[:2])
    shared = noisy_dictator(n, coord, rho, seed)
    members = {}
    for mask in range(1 << d):
        if mask in planted:
            members[mask] = shared
        else:
            members[mask] = make_folded(
                n,
                1
                - 2
                * derive_rng(*seed_key(seed), 1, mask)
                .integers(0, 2, size=1 << (n - 1))
                .astype(np.int8),
            )
    return IndexedFamily(d, n, members), (planted[0], planted[1])
