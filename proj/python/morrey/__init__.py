from ._core import (
    ConfigError,
    DegenerateAtom,
    Grid,
    GridMismatch,
    InputError,
    ParameterError,
    TruncationError,
    apply_P,
    apply_Q,
    calderon_constant,
    calderon_integral,
    calderon_reproduce,
    carleson_tent_norm,
    classical_seminorm,
    g_function_ratio,
    make_atom,
    maximal_seminorm,
    pair,
    power_law_field,
    run_command,
    semigroup_seminorm,
    square_function_seminorm,
    trig_field,
)

__all__ = [name for name in dir() if not name.startswith("_")]
