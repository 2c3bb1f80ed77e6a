"""Atomic entailment workbench: the three-valued matrix M_D, its first-order
extension L_D, atomic and classical entailment, and bounded consequence."""
from .entail_prop import (
    EntailmentVerdict,
    PoolConfig,
    atomic_entails_prop,
    classical_entails_prop,
    falsify_def51,
    gap_witness,
)
from .fol import (
    FolSubstitution,
    apply_fol_subst,
    existential_closure,
    free_vars,
    j_translate,
    prenex,
    star_fol,
    subst_term,
    universal_closure,
)
from .fol_engine import (
    LdVerdict,
    Membership,
    atomic_entails_fol,
    build_e_phi,
    classical_entails_fol,
    member_LD,
    run_schema_suite,
)
from .formula import to_text
from .matrix import M_2, M_D, M_D_PRIME, LogicalMatrix, Status, evaluate, is_valid
from .parsing import ParseError, parse_any, parse_fol, parse_prop
from .prop import PropSubstitution, apply_prop_subst
from .prover import Budget, ClassicalVerdict, classical_validity

__version__ = "0.1.0"
