import os
from dataclasses import dataclass, fields


@dataclass(frozen=True)
class SolverConfig():
    '''
    Runtime knobs shared by the solvers and the oracles.

    Every field can be overridden through an environment variable named
    `BILEVELKNAP_<FIELD>` (upper case), read by `from_env`.

    Attributes:
    - memory_cap (int): bytes the approximation scheme may allocate for its
      tables before refusing to run.
    - max_permutation_items (int): factorial guard of the permutation
      enumeration oracle.
    - max_product_scenarios (int): guard of the product-support expansion.
    - mc_block_size (int): samples per Monte Carlo block. Blocks are the
      unit of seeding, so estimates do not depend on the worker count.
    - workers (int): threads used to evaluate Monte Carlo blocks.
    - exact_uniform_items (int): largest n for which the permutation oracle
      integrates uniform order probabilities exactly.
    '''
    memory_cap: int = 512 * 1024 * 1024
    max_permutation_items: int = 8
    max_product_scenarios: int = 10 ** 6
    mc_block_size: int = 65536
    workers: int = 1
    exact_uniform_items: int = 4

    PREFIX = 'BILEVELKNAP_'

    @classmethod
    def from_env(cls, environ=None) -> "SolverConfig":
        '''
        Builds a configuration from the defaults, overridden by any
        `BILEVELKNAP_*` variable present in `environ` (os.environ by default).

        Exceptions:
        - ValueError: if a variable is not a positive integer.
        '''
        environ = os.environ if environ is None else environ
        values = {}
        for field in fields(cls):
            raw = environ.get(cls.PREFIX + field.name.upper())
            if raw is None:
                continue
            try:
                value = int(raw)
            except ValueError as e:
                raise ValueError(
                    f"{cls.PREFIX + field.name.upper()} must be an integer, "
                    f"got '{raw}'.") from e
            if value < 1:
                raise ValueError(
                    f"{cls.PREFIX + field.name.upper()} must be positive.")
            values[field.name] = value
        return cls(**values)


def resolve(config) -> SolverConfig:
    '''Returns `config`, or the environment configuration when it is None.'''
    return SolverConfig.from_env() if config is None else config
