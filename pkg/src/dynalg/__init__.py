"""Dynamic evaluation of the algebraic closure of Q, with Puiseux expansions."""

from .bezout import BezoutCertificate, SeparableAssociate, gcd_split, naive_gcd, separable_associate
from .cover import CoverTree, RootReport, factor_linear, solve_monic
from .errors import (
    DivisionByZeroError,
    DynalgError,
    InvariantError,
    NotMonicError,
    ParseError,
    PreconditionError,
    RingMismatchError,
)
from .exact_arith import BigRational, UniPoly, rat
from .puiseux import CurveInput, PuiseuxResult, newton_polygon, newton_puiseux
from .series import TruncatedSeries, ramify, substitute
from .split_value import SplitValue, sv_eq, sv_make, sv_restrict
from .tower import (
    QQ,
    AlgebraElement,
    SeparableTower,
    SplitCover,
    adjoin_root,
    amalgamate,
    is_invertible_split,
    minimal_polynomial,
    quasi_inverse,
    split_fundamental,
)

__version__ = "0.1.0"
