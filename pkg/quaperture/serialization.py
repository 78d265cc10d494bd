""" This module provides serialization and storage functionality.

Classes:
    - StorageBackend: Abstract representation of a data storage.
    - FilesystemBackend: Implementation of a file system data storage (one file per identifier).
    - DictBackend: In-memory storage, used by tests and dry runs.
    - Serializable: An interface for objects that appear as tagged entries in run configurations (receivers,
        scene parametrizations).
    - JSONSerializableEncoder / JSONSerializableDecoder: JSON codecs that translate Serializables to and from
        dictionaries tagged with the key '#type'.
"""

from abc import abstractmethod
from typing import Dict, Any, Callable, Iterator, Optional, Sequence, Set
import os
import json
import importlib
import numbers

import numpy

from quaperture.utils.types import DocStringABCMeta

__all__ = ["StorageBackend", "FilesystemBackend", "DictBackend", "Serializable", "SerializableMeta",
           "DeserializationCallbackFinder", "JSONSerializableEncoder", "JSONSerializableDecoder", "dumps", "loads",
           "UnknownTypeError"]


class StorageBackend(metaclass=DocStringABCMeta):
    """Flat store of text documents addressed by file names like "cfi.csv". The command line interface writes all
    result files through a backend."""

    @abstractmethod
    def put(self, identifier: str, data: str, overwrite: bool=False) -> None:
        """Store data under identifier.

        Raises:
            FileExistsError: if a document with this identifier exists and overwrite is False.
        """

    def __setitem__(self, identifier: str, data: str) -> None:
        self.put(identifier, data)

    @abstractmethod
    def get(self, identifier: str) -> str:
        """Raises:
            KeyError: if nothing is stored under identifier.
        """

    def __getitem__(self, identifier: str) -> str:
        return self.get(identifier)

    @abstractmethod
    def exists(self, identifier: str) -> bool:
        pass

    def __contains__(self, identifier: str) -> bool:
        return self.exists(identifier)

    @abstractmethod
    def delete(self, identifier: str) -> None:
        """Raises:
            KeyError: if nothing is stored under identifier.
        """

    def __delitem__(self, identifier: str) -> None:
        self.delete(identifier)

    @property
    def contents(self) -> Set[str]:
        return set(self)

    @abstractmethod
    def __iter__(self) -> Iterator[str]:
        """Stored identifiers."""

    def __len__(self) -> int:
        return len(self.contents)


class FilesystemBackend(StorageBackend):
    """One file per identifier in the directory root. Missing directories are only created with
    create_if_missing."""

    def __init__(self, root: str='.', create_if_missing: bool=False) -> None:
        """Raises:
            NotADirectoryError: if root is not a directory after the optional creation.
        """
        if not os.path.exists(root) and create_if_missing:
            os.makedirs(root)
        if not os.path.isdir(root):
            raise NotADirectoryError(root)
        self._root = os.path.abspath(root)

    @property
    def root(self) -> str:
        return self._root

    def _path(self, identifier: str) -> str:
        if os.path.basename(identifier) != identifier or identifier in ('', '.', '..'):
            raise ValueError('Identifiers must be plain file names', identifier)
        return os.path.join(self._root, identifier)

    def put(self, identifier: str, data: str, overwrite: bool=False) -> None:
        if self.exists(identifier) and not overwrite:
            raise FileExistsError(identifier)
        # newline='' keeps the byte content identical across platforms
        with open(self._path(identifier), 'w', encoding='utf-8', newline='') as file:
            file.write(data)

    def get(self, identifier: str) -> str:
        try:
            with open(self._path(identifier), encoding='utf-8', newline='') as file:
                return file.read()
        except FileNotFoundError as fnf:
            raise KeyError(identifier) from fnf

    def exists(self, identifier: str) -> bool:
        return os.path.isfile(self._path(identifier))

    def delete(self, identifier: str) -> None:
        try:
            os.remove(self._path(identifier))
        except FileNotFoundError as fnf:
            raise KeyError(identifier) from fnf

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(entry.name for entry in os.scandir(self._root) if entry.is_file()))


class DictBackend(StorageBackend):
    """In-memory backend without persistence."""
    def __init__(self) -> None:
        self._cache = {}  # type: Dict[str, str]

    def put(self, identifier: str, data: str, overwrite: bool=False) -> None:
        if identifier in self._cache and not overwrite:
            raise FileExistsError(identifier)
        self._cache[identifier] = data

    def get(self, identifier: str) -> str:
        return self._cache[identifier]

    def exists(self, identifier: str) -> bool:
        return identifier in self._cache

    @property
    def storage(self) -> Dict[str, str]:
        return self._cache

    def delete(self, identifier: str) -> None:
        del self._cache[identifier]

    def __iter__(self) -> Iterator[str]:
        return iter(self._cache)


class DeserializationCallbackFinder:
    """Maps type identifiers (fully qualified class names or registered short aliases) to deserialization callbacks.

    Unknown fully qualified names trigger an import of their module which registers the contained classes."""
    def __init__(self):
        self._storage = {}  # type: Dict[str, Callable]
        self._aliases = {}  # type: Dict[str, str]
        self.auto_import = True

    def __setitem__(self, type_name: str, callback: Callable):
        self._storage[type_name] = callback

    def add_alias(self, alias: str, type_name: str) -> None:
        if self._aliases.get(alias, type_name) != type_name:
            raise ValueError('Alias is already in use', alias, self._aliases[alias])
        self._aliases[alias] = type_name

    def resolve(self, type_name: str) -> str:
        return self._aliases.get(type_name, type_name)

    def __getitem__(self, type_name: str) -> Callable:
        type_name = self.resolve(type_name)

        if self.auto_import and type_name not in self._storage and '.' in type_name:
            module_name = '.'.join(type_name.split('.')[:-1])
            try:
                importlib.import_module(module_name)
            except ImportError as import_error:
                raise UnknownTypeError(type_name) from import_error

        try:
            return self._storage[type_name]
        except KeyError as key_error:
            raise UnknownTypeError(type_name) from key_error

    def __contains__(self, type_name) -> bool:
        return self.resolve(type_name) in self._storage

    @property
    def aliases(self) -> Dict[str, str]:
        return dict(self._aliases)


class SerializableMeta(DocStringABCMeta):
    deserialization_callbacks = DeserializationCallbackFinder()

    def __new__(mcs, name, bases, dct):
        cls = super().__new__(mcs, name, bases, dct)

        type_identifier = getattr(cls, 'get_type_identifier')()

        try:
            deserialization_function = getattr(cls, 'deserialize')
        except AttributeError:
            deserialization_function = cls
        mcs.deserialization_callbacks[type_identifier] = deserialization_function

        for alias in dct.get('type_aliases', ()):
            mcs.deserialization_callbacks.add_alias(alias, type_identifier)

        return cls


class Serializable(metaclass=SerializableMeta):
    """Any object that can be converted into a JSON compatible dictionary and back.

    get_serialization_data returns a dictionary of all constructor arguments (numbers, strings, lists and nested
    Serializables) plus the type tag. deserialize reconstructs the object from the keyword arguments. Subclasses
    may declare short names for configuration files in the class attribute type_aliases.
    """

    type_identifier_name = '#type'
    type_aliases = ()  # type: Sequence[str]

    def get_serialization_data(self) -> Dict[str, Any]:
        """Returns all data relevant for serialization as a dictionary containing only base types and nested
        Serializables. Implementations extend the dictionary returned by this base method."""
        return {self.type_identifier_name: self.get_type_identifier()}

    @classmethod
    def get_type_identifier(cls) -> str:
        return "{}.{}".format(cls.__module__, cls.__name__)

    @classmethod
    def deserialize(cls, **kwargs) -> 'Serializable':
        """Reconstructs the Serializable object from the keyword arguments returned by get_serialization_data."""
        return cls(**kwargs)


class JSONSerializableDecoder(json.JSONDecoder):
    """JSONDecoder for Serializables. Every dictionary with a '#type' entry is replaced by the deserialized
    object."""

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, object_hook=self.filter_serializables, **kwargs)

    @staticmethod
    def filter_serializables(obj_dict: Dict[str, Any]) -> Any:
        if Serializable.type_identifier_name in obj_dict:
            obj_dict = dict(obj_dict)
            type_identifier = obj_dict.pop(Serializable.type_identifier_name)
            deserialization_callback = SerializableMeta.deserialization_callbacks[type_identifier]
            return deserialization_callback(**obj_dict)
        return obj_dict


class JSONSerializableEncoder(json.JSONEncoder):
    """JSONEncoder for Serializables, numpy scalars and arrays and sets."""

    def default(self, o: Any) -> Any:
        if isinstance(o, Serializable):
            return o.get_serialization_data()

        elif isinstance(o, numpy.ndarray):
            return o.tolist()

        elif isinstance(o, numpy.bool_):
            return bool(o)

        elif isinstance(o, numbers.Integral):
            return int(o)

        elif isinstance(o, numbers.Real):
            return float(o)

        elif type(o) is set:
            return sorted(o)

        else:
            return super().default(o)


def dumps(obj: Any, indent: Optional[int]=None) -> str:
    """Canonical JSON dump (sorted keys) understood by :func:`loads`."""
    return json.dumps(obj, cls=JSONSerializableEncoder, sort_keys=True, indent=indent)


def loads(text: str) -> Any:
    return json.loads(text, cls=JSONSerializableDecoder)


class UnknownTypeError(ValueError):
    """A '#type' tag names neither a registered Serializable nor an alias."""

    def __init__(self, type_name: str) -> None:
        super().__init__()
        self.type_name = type_name

    def __str__(self) -> str:
        aliases = sorted(SerializableMeta.deserialization_callbacks.aliases)
        return "Unknown type <{}>. Known short names: {}".format(self.type_name, ', '.join(aliases))
