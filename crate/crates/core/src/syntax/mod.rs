//! Process terms: names, parsing, printing, substitution and the syntactic
//! measures.

pub(crate) mod lexer;
mod name;
mod parse;
mod print;
mod term;

pub use name::{fresh_name, fresh_name_from, is_identifier, Name, Variable};
pub use parse::{parse_process, parse_process_with, ParseOptions};
pub use print::print_process;
pub use term::{build, Atom, CapKind, Capability, Mode, Process};

/// η position: a name or a variable.
pub type NameOrVar = Atom;

use crate::congruence::{eta_nf, Canon};
use crate::error::Error;

/// Sequentiality degree, computed on the eta normal form.
pub fn seq_degree(p: &Process) -> Result<usize, Error> {
    p.require_closed("seq_degree")?;
    Ok(eta_nf(&Canon::from_process(p), false).raw_seq_degree())
}

pub fn depth_degree(p: &Process) -> usize {
    p.depth_degree()
}

/// OP: capabilities plus abstractions.
pub fn count_prefixes(p: &Process) -> usize {
    p.count_prefixes()
}

/// OPmess: messages.
pub fn count_messages(p: &Process) -> usize {
    p.count_messages()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_closed: bool,
    pub is_finite: bool,
    pub is_single: bool,
    pub is_maifs: bool,
}

pub fn classify(p: &Process) -> Classification {
    let c = Canon::from_process(p);
    Classification {
        is_closed: p.is_closed(),
        is_finite: c.is_finite(),
        is_single: c.as_single().is_some(),
        is_maifs: c.is_maifs(),
    }
}
