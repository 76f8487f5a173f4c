"""Data module for gencurv.

This module provides access to the instance files bundled with the package.

Bundled instances:
    abelian: R^3 with the Euclidean metric
    so3: so(3) with alpha = h = 1, a divergence-free solution
    heis: Heisenberg algebra in normal form L3(0, 0) with an admissible divergence
    r31prime: The divergence-free non-unimodular solution with theta = 1
    random_n3: Non-unimodular three-dimensional data with an indefinite metric
    corrupted_jacobi: Antisymmetric constants violating the Jacobi identity

Functions:
    load_instance: Load an instance by name or path
    parse_instance: Build an instance from a decoded payload
    instance_to_dict: Serialise an instance
    get_data_path: Get path to data directory
    list_available_instances: List bundled instances

Examples:
    >>> from gencurv.data import load_instance, list_available_instances
    >>>
    >>> list_available_instances()
    ['abelian', 'corrupted_jacobi', 'heis', 'r31prime', 'random_n3', 'so3']
"""

from .instance_loader import (
    LoadedInstance,
    load_instance,
    parse_instance,
    instance_to_dict,
    get_data_path,
    list_available_instances,
)

__all__ = [
    "LoadedInstance",
    "load_instance",
    "parse_instance",
    "instance_to_dict",
    "get_data_path",
    "list_available_instances",
]
