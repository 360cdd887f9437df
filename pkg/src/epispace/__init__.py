"""Belief change over epistemic spaces: operators, postulate checks, and
credibility-limited assignments over small propositional signatures."""

from .errors import (ConstraintViolation, DomainError, EpispaceError, FormatError, FormulaSyntaxError,
                     NoSuchBeliefState, NotAPreorder, ScaleExceeded, SignatureError, UnknownAtomError)
from .logic import Signature, dnf, entails, expand, minterm, models, pair_formula, parse, to_text
from .space import EpistemicSpace, StateId, is_globally_consistent, resolve_state
from .operators import SemanticOperator, apply, build_example1, build_example2, to_dot
from .postulates import CheckResult, ClassMembership, PostulateId, Verdict, check, check_all, classify
from .assignments import (Assignment, Flag, StateAssignment, TotalPreorder, extract, is_compatible,
                          is_faithful, min_elements, synthesize)

__version__ = "0.1.0"
