//! Halpern–Shoham interval temporal logic: syntax, model checking over finite and
//! ultimately periodic domains, satisfiability for the B iB L iL fragment,
//! counter automaton encodings and the fragment expressiveness atlas.

pub mod atlas;
pub mod automaton;
pub mod closure;
pub mod dag;
pub mod encoding;
pub mod error;
pub mod finite;
pub mod formula;
pub mod interval;
pub mod model;
pub mod modality;
pub mod parser;
pub mod periodic;
pub mod sat;
pub mod solver;

pub use closure::{closure, metrics, FormulaMetrics};
pub use error::{AtlasError, AutomatonError, ModelError, ParseError, SatError};
pub use formula::{mirror_formula, Formula};
pub use interval::{allen_related, canonical_interval, Domain, Interval, Periodicity};
pub use modality::{mirror_fragment, Base, Fragment, Modality};
pub use parser::parse_formula;
pub use finite::{mc_finite, FiniteEvaluator};
pub use model::{load_certificate, load_model, save_certificate, save_model, IntervalModel};
pub use periodic::{default_rounds, mc_periodic, NotStabilized, PeriodicEvaluator};
pub use sat::{check_certificate, sat_bbll, sat_bounded_finite, tau, SatResult};
pub use automaton::{load_automaton, step_exact, step_incrementing, Config, CounterAutomaton, Op, Transition};
pub use encoding::{encode_ae, encode_fragment, encode_groups, layout_model, universal_nat, Lasso};
pub use atlas::{
    certify_undefinability, check_equation, classify, definable_closure, enumerate_fragments, fragment_leq,
    hasse_dot, is_f_bisimulation, largest_f_bisimulation, BisimRelation, ClassContext, ComplexityLabel,
    EquationResult,
};
