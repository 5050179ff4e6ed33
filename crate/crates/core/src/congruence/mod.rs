//! Structural congruence, the eta law and frozen subterms.

mod canon;
mod eta;
mod frozen;

use std::collections::BTreeSet;

pub use canon::{prefix_of, Canon, Component, Single};
pub use eta::{
    abs_count, eta_congruent as eta_congruent_canon, eta_normal_form as eta_nf,
    eta_step as eta_step_canon,
};
pub use frozen::frozen_subterms as frozen_canon;

use crate::syntax::{Name, Process};

/// Finite name set `N`.
pub type NameSet = BTreeSet<Name>;

pub fn canonicalize(p: &Process) -> Canon {
    Canon::from_process(p)
}

pub fn struct_congruent(p: &Process, q: &Process) -> bool {
    Canon::from_process(p) == Canon::from_process(q)
}

/// One-step eta reducts modulo congruence.
pub fn eta_step(p: &Process, head_only: bool) -> Vec<Process> {
    eta::eta_step(&Canon::from_process(p), head_only)
        .iter()
        .map(Canon::to_process)
        .collect()
}

pub fn eta_normal_form(p: &Process, head_only: bool) -> Process {
    eta::eta_normal_form(&Canon::from_process(p), head_only).to_process()
}

/// Equality modulo congruence and the eta law.
pub fn eta_congruent(p: &Process, q: &Process) -> bool {
    eta::eta_congruent(&Canon::from_process(p), &Canon::from_process(q))
}

pub fn frozen_subterms(p: &Process, names: &NameSet) -> BTreeSet<Canon> {
    frozen::frozen_subterms(&Canon::from_process(p), names)
}
