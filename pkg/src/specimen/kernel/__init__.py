"""System F core: types, terms, type checking and normalisation."""

from .errors import (
    ApplicationMismatch,
    FuelExhausted,
    GeneralisationViolation,
    IllFormedType,
    IllTyped,
    KernelError,
    NotAFunction,
    SpecialisationOfNonPi,
    TypeMismatch,
    UnboundVariable,
    UnknownConstant,
    UnknownSort,
)
from .printing import format_term, format_type
from .reduce import (
    DEFAULT_FUEL,
    NormalForm,
    contract,
    is_normal,
    is_redex,
    normalize,
    normalize_counted,
    reduce_step,
    reductions,
)
from .syntax import SurfaceParser, parse_term, parse_type
from .terms import (
    Abs,
    App,
    Bound,
    Const,
    Term,
    TyAbs,
    TyApp,
    Var,
    alpha_eq,
    apply,
    free_vars,
    is_closed,
    lam,
    spine,
    subst_term,
    subst_type,
    subst_types,
    tlam,
)
from .types import (
    PROP,
    T,
    Arrow,
    BaseSort,
    Forall,
    Type,
    TyBound,
    TypeVar,
    arrows,
    forall,
    instantiate,
)
from .typing import Signature, is_well_typed, type_of

__all__ = [name for name in dir() if not name.startswith("_")]
