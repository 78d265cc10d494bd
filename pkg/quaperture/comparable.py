"""This module defines the abstract Comparable class used by the immutable value objects of quaperture
(aperture arrays, receiver specifications, scene parametrizations)."""
from abc import abstractmethod
from typing import Any

from quaperture.utils.types import DocStringABCMeta


__all__ = ["Comparable"]


class Comparable(metaclass=DocStringABCMeta):
    """An immutable value object that can be compared and hashed.

    Subclasses provide compare_key, a natively equatable Python object (numbers, strings, bytes or tuples of these)
    which fully describes the object. Two Comparables are equal iff they are of the same class and their keys are
    equal. Numpy arrays must be converted with :func:`quaperture.utils.types.array_key` before they enter a key.
    """

    @property
    @abstractmethod
    def compare_key(self) -> Any:
        """Return a unique key used in comparison and hashing operations."""

    def __hash__(self) -> int:
        return hash((self.__class__.__name__, self.compare_key))

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, self.__class__) and self.compare_key == other.compare_key

    def __ne__(self, other: Any) -> bool:
        return not self == other
