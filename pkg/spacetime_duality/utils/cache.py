#!/usr/bin/env python
"""Append-only store of computed traces, one JSON-lines file per parameter hash."""
import hashlib
import json
import logging
import os
import pathlib
import typing as ty

LOGGER = logging.getLogger(__name__)

CACHE_ENVIRONMENT_VARIABLE = "SPACETIME_DUALITY_CACHE"


def _to_builtin(value: ty.Any) -> ty.Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(data: ty.Any) -> str:
    """Serialize ``data`` independently of key order; numpy scalars and arrays become lists and numbers."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=_to_builtin)


def params_hash(model: str, params: ty.Mapping[str, ty.Any]) -> str:
    """SHA-256 of the canonical JSON of ``(model, params)``."""
    payload = canonical_json({"model": model, "params": params})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class TraceCache:
    """Complex traces keyed by ``(model, params, T, index)``.

    ``index`` is ``j`` for spin models and the sample number for the cat map. Values
    are stored as ``[re, im]``; JSON writes floats with ``repr`` so hits are exact.
    """

    def __init__(self, directory: ty.Union[str, pathlib.Path]):
        self.directory = pathlib.Path(directory)
        self._loaded: ty.Dict[str, ty.Dict[ty.Tuple[int, int], complex]] = {}
        self.hits = 0
        self.misses = 0

    @classmethod
    def from_environment(cls, default: ty.Union[str, pathlib.Path]) -> "TraceCache":
        """Cache in ``$SPACETIME_DUALITY_CACHE`` if set, else in ``default``."""
        return cls(os.environ.get(CACHE_ENVIRONMENT_VARIABLE, default))

    def _filepath(self, digest: str) -> pathlib.Path:
        return self.directory / f"{digest}.jsonl"

    def _entries(self, digest: str) -> ty.Dict[ty.Tuple[int, int], complex]:
        if digest not in self._loaded:
            entries = {}
            filepath = self._filepath(digest)
            if filepath.exists():
                with open(filepath, encoding="utf-8") as handle:
                    for line in handle:
                        line = line.strip()
                        if not line:
                            continue
                        record = json.loads(line)
                        entries[(record["T"], record["index"])] = complex(*record["value"])
            self._loaded[digest] = entries
        return self._loaded[digest]

    def get(self, model: str, params: ty.Mapping[str, ty.Any], T: int, index: int) -> ty.Optional[complex]:  # pylint: disable=invalid-name
        value = self._entries(params_hash(model, params)).get((int(T), int(index)))
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, model: str, params: ty.Mapping[str, ty.Any], T: int, index: int, value: complex) -> None:  # pylint: disable=invalid-name
        """Append one trace; an existing entry for the same key is left untouched."""
        digest = params_hash(model, params)
        entries = self._entries(digest)
        key = (int(T), int(index))
        if key in entries:
            return

        value = complex(value)
        self.directory.mkdir(parents=True, exist_ok=True)
        if not self._filepath(digest).exists():
            with open(self.directory / f"{digest}.params.json", "w", encoding="utf-8") as handle:
                handle.write(canonical_json({"model": model, "params": params}) + "\n")
        with open(self._filepath(digest), "a", encoding="utf-8") as handle:
            handle.write(canonical_json({"T": key[0], "index": key[1], "value": [value.real, value.imag]}) + "\n")
        entries[key] = value

    def __len__(self) -> int:
        return sum(len(entries) for entries in self._loaded.values())
