use std::collections::BTreeSet;
use std::fmt;

use super::name::{Name, Variable};
use crate::error::Error;

/// Communication mode of a document. Fixed per session.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Mode {
    #[default]
    Async,
    Sync,
}

/// A name or a variable in η position.
///
/// Variables bound by an abstraction are de Bruijn indices (`Bound(0)` is the
/// nearest enclosing binder), so alpha-equivalent terms are identical.
/// `Free` marks a free process variable or a logical variable of a formula.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    Name(Name),
    Bound(u32),
    Free(Variable),
}

impl Atom {
    pub fn name(s: &str) -> Atom {
        Atom::Name(Name::new(s))
    }

    pub fn as_name(self) -> Option<Name> {
        match self {
            Atom::Name(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CapKind {
    In,
    Out,
    Open,
}

impl CapKind {
    pub fn keyword(self) -> &'static str {
        match self {
            CapKind::In => "in",
            CapKind::Out => "out",
            CapKind::Open => "open",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Capability {
    pub kind: CapKind,
    pub target: Atom,
}

impl Capability {
    pub fn new(kind: CapKind, target: Atom) -> Capability {
        Capability { kind, target }
    }

    pub fn named(kind: CapKind, target: &str) -> Capability {
        Capability {
            kind,
            target: Atom::name(target),
        }
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.target {
            Atom::Name(n) => write!(f, "{} {}", self.kind.keyword(), n),
            Atom::Free(v) => write!(f, "{} {}", self.kind.keyword(), v),
            Atom::Bound(i) => write!(f, "{} #{}", self.kind.keyword(), i),
        }
    }
}

/// Raw process syntax, as produced by the parser.
///
/// Structural congruence is decided on [`crate::congruence::Canon`]; this
/// type keeps the tree exactly as written.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Process {
    Nil,
    Par(Box<Process>, Box<Process>),
    Repl(Box<Process>),
    Prefix(Capability, Box<Process>),
    Amb(Atom, Box<Process>),
    /// Output; the continuation is present exactly in synchronous mode.
    Msg(Atom, Option<Box<Process>>),
    /// Abstraction binding de Bruijn index 0 in its body.
    Abs(Box<Process>),
}

impl Process {
    pub fn par(a: Process, b: Process) -> Process {
        Process::Par(Box::new(a), Box::new(b))
    }

    /// Right-nested parallel composition; empty input gives `0`.
    pub fn par_all<I: IntoIterator<Item = Process>>(items: I) -> Process {
        let mut items: Vec<Process> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Process::Nil;
        };
        while let Some(p) = items.pop() {
            acc = Process::par(p, acc);
        }
        acc
    }

    pub fn repl(p: Process) -> Process {
        Process::Repl(Box::new(p))
    }

    pub fn prefix(cap: Capability, body: Process) -> Process {
        Process::Prefix(cap, Box::new(body))
    }

    pub fn amb(name: Atom, body: Process) -> Process {
        Process::Amb(name, Box::new(body))
    }

    pub fn msg(payload: Atom) -> Process {
        Process::Msg(payload, None)
    }

    pub fn msg_then(payload: Atom, cont: Process) -> Process {
        Process::Msg(payload, Some(Box::new(cont)))
    }

    /// Builds `(x)body`, binding every free occurrence of `x` in `body`.
    pub fn abs(x: Variable, body: Process) -> Process {
        Process::Abs(Box::new(body.close_var(x, 0)))
    }

    fn close_var(&self, x: Variable, depth: u32) -> Process {
        self.map_atoms(depth, &|a, d| match a {
            Atom::Free(v) if v == x => Atom::Bound(d),
            other => other,
        })
    }

    /// Rebuilds the tree, applying `f` to every atom together with the
    /// number of binders crossed to reach it.
    pub fn map_atoms(&self, depth: u32, f: &dyn Fn(Atom, u32) -> Atom) -> Process {
        match self {
            Process::Nil => Process::Nil,
            Process::Par(a, b) => Process::par(a.map_atoms(depth, f), b.map_atoms(depth, f)),
            Process::Repl(p) => Process::repl(p.map_atoms(depth, f)),
            Process::Prefix(c, p) => Process::prefix(
                Capability::new(c.kind, f(c.target, depth)),
                p.map_atoms(depth, f),
            ),
            Process::Amb(n, p) => Process::amb(f(*n, depth), p.map_atoms(depth, f)),
            Process::Msg(n, k) => Process::Msg(
                f(*n, depth),
                k.as_ref().map(|k| Box::new(k.map_atoms(depth, f))),
            ),
            Process::Abs(p) => Process::Abs(Box::new(p.map_atoms(depth + 1, f))),
        }
    }

    fn visit_atoms(&self, depth: u32, f: &mut dyn FnMut(Atom, u32)) {
        match self {
            Process::Nil => {}
            Process::Par(a, b) => {
                a.visit_atoms(depth, f);
                b.visit_atoms(depth, f);
            }
            Process::Repl(p) => p.visit_atoms(depth, f),
            Process::Prefix(c, p) => {
                f(c.target, depth);
                p.visit_atoms(depth, f);
            }
            Process::Amb(n, p) => {
                f(*n, depth);
                p.visit_atoms(depth, f);
            }
            Process::Msg(n, k) => {
                f(*n, depth);
                if let Some(k) = k {
                    k.visit_atoms(depth, f);
                }
            }
            Process::Abs(p) => p.visit_atoms(depth + 1, f),
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_atoms(0, &mut |a, _| {
            if let Atom::Name(n) = a {
                out.insert(n);
            }
        });
        out
    }

    /// Free variables: named free variables plus `Bound` indices that escape
    /// every enclosing binder (only possible in hand-built terms).
    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.visit_atoms(0, &mut |a, d| match a {
            Atom::Free(v) => {
                out.insert(v);
            }
            Atom::Bound(i) if i >= d => {
                out.insert(Variable::new(&format!("#{}", i - d)));
            }
            _ => {}
        });
        out
    }

    pub fn is_closed(&self) -> bool {
        let mut closed = true;
        self.visit_atoms(0, &mut |a, d| match a {
            Atom::Free(_) => closed = false,
            Atom::Bound(i) if i >= d => closed = false,
            _ => {}
        });
        closed
    }

    /// `P{n/x}` for a free variable `x`. Bound occurrences are indices and
    /// therefore untouched, which is exactly shadowing.
    pub fn substitute_name(&self, x: Variable, n: Name) -> Process {
        self.map_atoms(0, &|a, _| match a {
            Atom::Free(v) if v == x => Atom::Name(n),
            other => other,
        })
    }

    /// `P{n/m}` on names.
    pub fn replace_name(&self, m: Name, n: Name) -> Process {
        self.map_atoms(0, &|a, _| match a {
            Atom::Name(k) if k == m => Atom::Name(n),
            other => other,
        })
    }

    /// Adds `delta` to every index that is free at `cutoff` binders deep.
    pub fn shift(&self, cutoff: u32, delta: i64) -> Process {
        self.map_atoms(0, &|a, d| match a {
            Atom::Bound(i) if i >= cutoff + d => Atom::Bound((i as i64 + delta) as u32),
            other => other,
        })
    }

    /// Substitutes `n` for index 0 of an abstraction body (`P{n/x}` where
    /// `(x)P` is the abstraction).
    pub fn instantiate(&self, n: Name) -> Process {
        self.map_atoms(0, &|a, d| match a {
            Atom::Bound(i) if i == d => Atom::Name(n),
            Atom::Bound(i) if i > d => Atom::Bound(i - 1),
            other => other,
        })
    }

    /// OP: number of capabilities and abstractions.
    pub fn count_prefixes(&self) -> usize {
        match self {
            Process::Nil | Process::Msg(_, None) => 0,
            Process::Msg(_, Some(k)) => k.count_prefixes(),
            Process::Par(a, b) => a.count_prefixes() + b.count_prefixes(),
            Process::Repl(p) | Process::Amb(_, p) => p.count_prefixes(),
            Process::Prefix(_, p) | Process::Abs(p) => 1 + p.count_prefixes(),
        }
    }

    /// OPmess: number of messages.
    pub fn count_messages(&self) -> usize {
        match self {
            Process::Nil => 0,
            Process::Msg(_, k) => 1 + k.as_ref().map_or(0, |k| k.count_messages()),
            Process::Par(a, b) => a.count_messages() + b.count_messages(),
            Process::Repl(p) | Process::Amb(_, p) | Process::Prefix(_, p) | Process::Abs(p) => {
                p.count_messages()
            }
        }
    }

    /// Depth degree: maximal nesting of ambients outside any guard.
    pub fn depth_degree(&self) -> usize {
        match self {
            Process::Nil | Process::Prefix(..) | Process::Abs(_) | Process::Msg(..) => 0,
            Process::Par(a, b) => a.depth_degree().max(b.depth_degree()),
            Process::Repl(p) => p.depth_degree(),
            Process::Amb(_, p) => 1 + p.depth_degree(),
        }
    }

    /// Number of syntax nodes other than `Par`.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil => 1,
            Process::Par(a, b) => a.size() + b.size(),
            Process::Msg(_, None) => 1,
            Process::Msg(_, Some(p))
            | Process::Repl(p)
            | Process::Prefix(_, p)
            | Process::Amb(_, p)
            | Process::Abs(p) => 1 + p.size(),
        }
    }

    /// Checks that every message agrees with `mode`.
    pub fn check_mode(&self, mode: Mode) -> Result<(), Error> {
        match self {
            Process::Nil => Ok(()),
            Process::Par(a, b) => {
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
            Process::Repl(p) | Process::Prefix(_, p) | Process::Amb(_, p) | Process::Abs(p) => {
                p.check_mode(mode)
            }
            Process::Msg(_, None) if mode == Mode::Async => Ok(()),
            Process::Msg(_, Some(k)) if mode == Mode::Sync => k.check_mode(mode),
            Process::Msg(_, None) => Err(Error::ModeMismatch(
                "asynchronous message in a synchronous term".into(),
            )),
            Process::Msg(_, Some(_)) => Err(Error::ModeMismatch(
                "synchronous message in an asynchronous term".into(),
            )),
        }
    }

    pub(crate) fn require_closed(&self, what: &str) -> Result<(), Error> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(Error::OpenTerm(format!("{what}: {self}")))
        }
    }
}

/// Short constructors, mostly for tests and the Turing encoder.
pub mod build {
    use super::*;

    pub fn nil() -> Process {
        Process::Nil
    }

    pub fn par<I: IntoIterator<Item = Process>>(items: I) -> Process {
        Process::par_all(items)
    }

    pub fn bang(p: Process) -> Process {
        Process::repl(p)
    }

    pub fn amb(n: &str, body: Process) -> Process {
        Process::amb(Atom::name(n), body)
    }

    pub fn in_(n: &str, body: Process) -> Process {
        Process::prefix(Capability::named(CapKind::In, n), body)
    }

    pub fn out(n: &str, body: Process) -> Process {
        Process::prefix(Capability::named(CapKind::Out, n), body)
    }

    pub fn open(n: &str, body: Process) -> Process {
        Process::prefix(Capability::named(CapKind::Open, n), body)
    }

    pub fn msg(n: &str) -> Process {
        Process::msg(Atom::name(n))
    }

    /// A free process variable in message position.
    pub fn msg_var(x: &str) -> Process {
        Process::msg(Atom::Free(Variable::new(x)))
    }

    pub fn abs(x: &str, body: Process) -> Process {
        Process::abs(Variable::new(x), body)
    }

    /// Nests prefixes: `caps = [c1, c2]` gives `c1.c2.body`.
    pub fn seq(caps: &[Capability], body: Process) -> Process {
        caps.iter()
            .rev()
            .fold(body, |acc, c| Process::prefix(*c, acc))
    }
}
