"""Partition refinement of coalgebras modulo behavioural equivalence."""
from .functor import parse_functor, format_functor, flatten, FunctorSyntaxError
from .coalgebra import (Coalgebra, EncodedCoalgebra, read_coalgebra, parse_coalgebra,
                        desort, write_partition, format_coalgebra)
from .refiner import Refiner, refine
from .naive import naive_fixpoint


def minimize(text: str, **options) -> str:
    """Minimize a coalgebra given as file text; returns the partition listing."""
    _, c = read_coalgebra(text)
    enc = desort(c)
    block_of, _ = refine(enc, **options)
    return write_partition(enc.names, block_of[:enc.n0])


__all__ = [
    "parse_functor", "format_functor", "flatten", "FunctorSyntaxError",
    "Coalgebra", "EncodedCoalgebra", "read_coalgebra", "parse_coalgebra", "desort",
    "write_partition", "format_coalgebra", "Refiner", "refine", "naive_fixpoint", "minimize",
]
