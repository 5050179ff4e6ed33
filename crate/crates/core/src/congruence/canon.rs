use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock};

use crate::syntax::{Atom, CapKind, Capability, Name, Process};

/// Canonical form of a process modulo structural congruence.
///
/// A sorted multiset of single components, each flagged plain or
/// replicated. Replicated components are distinct, no plain component
/// repeats a replicated one, and every body is itself canonical, so two
/// processes are congruent exactly when their canonical forms are equal.
/// Nodes are shared and carry a cached hash.
#[derive(Clone)]
pub struct Canon(Arc<Node>);

struct Node {
    comps: Vec<Component>,
    hash: u64,
    /// One more than the largest de Bruijn index escaping this node.
    loose: u32,
    free_vars: bool,
    size: u32,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub single: Single,
    pub replicated: bool,
}

/// A process whose head is a prefix, ambient, message or abstraction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Single {
    Prefix(Capability, Canon),
    Amb(Atom, Canon),
    Msg(Atom, Option<Canon>),
    Abs(Canon),
}

static NIL: LazyLock<Canon> = LazyLock::new(|| Canon::build(Vec::new()));

fn atom_loose(a: Atom) -> u32 {
    match a {
        Atom::Bound(i) => i + 1,
        _ => 0,
    }
}

impl Single {
    fn loose(&self) -> u32 {
        match self {
            Single::Prefix(c, b) => atom_loose(c.target).max(b.loose()),
            Single::Amb(a, b) => atom_loose(*a).max(b.loose()),
            Single::Msg(a, k) => atom_loose(*a).max(k.as_ref().map_or(0, |k| k.loose())),
            Single::Abs(b) => b.loose().saturating_sub(1),
        }
    }

    fn free_vars(&self) -> bool {
        let atom = |a: &Atom| matches!(a, Atom::Free(_));
        match self {
            Single::Prefix(c, b) => atom(&c.target) || b.has_free_vars(),
            Single::Amb(a, b) => atom(a) || b.has_free_vars(),
            Single::Msg(a, k) => atom(a) || k.as_ref().is_some_and(|k| k.has_free_vars()),
            Single::Abs(b) => b.has_free_vars(),
        }
    }

    fn size(&self) -> u32 {
        1 + match self {
            Single::Prefix(_, b) | Single::Amb(_, b) | Single::Abs(b) => b.size() as u32,
            Single::Msg(_, k) => k.as_ref().map_or(0, |k| k.size() as u32),
        }
    }

    pub fn to_process(&self) -> Process {
        match self {
            Single::Prefix(c, b) => Process::prefix(*c, b.to_process()),
            Single::Amb(a, b) => Process::amb(*a, b.to_process()),
            Single::Msg(a, None) => Process::msg(*a),
            Single::Msg(a, Some(k)) => Process::msg_then(*a, k.to_process()),
            Single::Abs(b) => Process::Abs(Box::new(b.to_process())),
        }
    }

    /// Rebuilds the single, mapping atoms and recursing into bodies.
    /// `f` receives each atom and the binder depth relative to the start.
    fn map(
        &self,
        depth: u32,
        f: &mut dyn FnMut(Atom, u32) -> Atom,
        skip: &dyn Fn(&Canon, u32) -> bool,
    ) -> Single {
        match self {
            Single::Prefix(c, b) => Single::Prefix(
                Capability::new(c.kind, f(c.target, depth)),
                b.map_rec(depth, f, skip),
            ),
            Single::Amb(a, b) => Single::Amb(f(*a, depth), b.map_rec(depth, f, skip)),
            Single::Msg(a, k) => {
                Single::Msg(f(*a, depth), k.as_ref().map(|k| k.map_rec(depth, f, skip)))
            }
            Single::Abs(b) => Single::Abs(b.map_rec(depth + 1, f, skip)),
        }
    }

    pub fn body(&self) -> Option<&Canon> {
        match self {
            Single::Prefix(_, b) | Single::Amb(_, b) | Single::Abs(b) => Some(b),
            Single::Msg(_, k) => k.as_ref(),
        }
    }
}

impl Component {
    pub fn plain(single: Single) -> Component {
        Component {
            single,
            replicated: false,
        }
    }

    pub fn to_process(&self) -> Process {
        let p = self.single.to_process();
        if self.replicated {
            Process::repl(p)
        } else {
            p
        }
    }
}

fn normalize(mut comps: Vec<Component>) -> Vec<Component> {
    comps.sort_unstable();
    let mut out: Vec<Component> = Vec::with_capacity(comps.len());
    let mut i = 0;
    while i < comps.len() {
        let mut j = i + 1;
        while j < comps.len() && comps[j].single == comps[i].single {
            j += 1;
        }
        // Plain sorts before replicated within a group of equal singles.
        if comps[j - 1].replicated {
            out.push(comps[j - 1].clone());
        } else {
            out.extend_from_slice(&comps[i..j]);
        }
        i = j;
    }
    out
}

impl Canon {
    fn build(comps: Vec<Component>) -> Canon {
        let mut h = DefaultHasher::new();
        comps.hash(&mut h);
        let loose = comps.iter().map(|c| c.single.loose()).max().unwrap_or(0);
        let free_vars = comps.iter().any(|c| c.single.free_vars());
        let size = comps.iter().map(|c| c.single.size()).sum();
        Canon(Arc::new(Node {
            comps,
            hash: h.finish(),
            loose,
            free_vars,
            size,
        }))
    }

    pub fn nil() -> Canon {
        NIL.clone()
    }

    /// Normalizes an arbitrary list of components.
    pub fn from_components(comps: Vec<Component>) -> Canon {
        if comps.is_empty() {
            return Canon::nil();
        }
        Canon::build(normalize(comps))
    }

    pub fn single(s: Single) -> Canon {
        Canon::build(vec![Component::plain(s)])
    }

    pub fn from_process(p: &Process) -> Canon {
        let mut comps = Vec::new();
        collect(p, false, &mut comps);
        Canon::from_components(comps)
    }

    pub fn components(&self) -> &[Component] {
        &self.0.comps
    }

    pub fn is_nil(&self) -> bool {
        self.0.comps.is_empty()
    }

    /// The single plain component, when the process is single.
    pub fn as_single(&self) -> Option<&Single> {
        match self.components() {
            [c] if !c.replicated => Some(&c.single),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    pub fn loose(&self) -> u32 {
        self.0.loose
    }

    pub fn has_free_vars(&self) -> bool {
        self.0.free_vars
    }

    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && !self.0.free_vars
    }

    pub fn to_process(&self) -> Process {
        Process::par_all(self.components().iter().map(Component::to_process))
    }

    pub fn par(&self, other: &Canon) -> Canon {
        if self.is_nil() {
            return other.clone();
        }
        if other.is_nil() {
            return self.clone();
        }
        let mut comps = self.components().to_vec();
        comps.extend_from_slice(other.components());
        Canon::from_components(comps)
    }

    pub fn replicate(&self) -> Canon {
        Canon::from_components(
            self.components()
                .iter()
                .map(|c| Component {
                    single: c.single.clone(),
                    replicated: true,
                })
                .collect(),
        )
    }

    fn map_rec(
        &self,
        depth: u32,
        f: &mut dyn FnMut(Atom, u32) -> Atom,
        skip: &dyn Fn(&Canon, u32) -> bool,
    ) -> Canon {
        if skip(self, depth) {
            return self.clone();
        }
        Canon::from_components(
            self.components()
                .iter()
                .map(|c| Component {
                    single: c.single.map(depth, f, skip),
                    replicated: c.replicated,
                })
                .collect(),
        )
    }

    /// `P{n/x}` where this is the body of `(x)P`: index 0 becomes `n` and
    /// outer indices move down by one.
    pub fn instantiate(&self, n: Name) -> Canon {
        self.map_rec(
            0,
            &mut |a, d| match a {
                Atom::Bound(i) if i == d => Atom::Name(n),
                Atom::Bound(i) if i > d => Atom::Bound(i - 1),
                other => other,
            },
            &|c, d| c.loose() <= d,
        )
    }

    /// Adds `delta` to every index that escapes `cutoff` binders.
    pub fn shift(&self, cutoff: u32, delta: i64) -> Canon {
        self.map_rec(
            0,
            &mut |a, d| match a {
                Atom::Bound(i) if i >= cutoff + d => Atom::Bound((i as i64 + delta) as u32),
                other => other,
            },
            &|c, d| c.loose() <= cutoff + d,
        )
    }

    pub fn rename(&self, m: Name, n: Name) -> Canon {
        self.map_rec(
            0,
            &mut |a, _| match a {
                Atom::Name(k) if k == m => Atom::Name(n),
                other => other,
            },
            &|_, _| false,
        )
    }

    /// Whether index `k` (relative to this node) occurs free.
    pub fn uses_index(&self, k: u32) -> bool {
        if self.loose() <= k {
            return false;
        }
        self.components()
            .iter()
            .any(|c| single_uses_index(&c.single, k))
    }

    pub fn free_names_into(&self, out: &mut BTreeSet<Name>) {
        for c in self.components() {
            let s = &c.single;
            let atom = match s {
                Single::Prefix(cap, _) => Some(cap.target),
                Single::Amb(a, _) | Single::Msg(a, _) => Some(*a),
                Single::Abs(_) => None,
            };
            if let Some(Atom::Name(n)) = atom {
                out.insert(n);
            }
            if let Some(b) = s.body() {
                b.free_names_into(out);
            }
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.free_names_into(&mut out);
        out
    }

    /// No replicated component anywhere.
    pub fn is_finite(&self) -> bool {
        self.components()
            .iter()
            .all(|c| !c.replicated && c.single.body().is_none_or(|b| b.is_finite()))
    }

    /// Every guarded body (under a capability, an abstraction or a
    /// synchronous output) is finite.
    pub fn is_maifs(&self) -> bool {
        self.components().iter().all(|c| match &c.single {
            Single::Amb(_, b) => b.is_maifs(),
            s => s.body().is_none_or(|b| b.is_finite()),
        })
    }

    /// Sequentiality degree of this representative, without eta
    /// normalization.
    pub fn raw_seq_degree(&self) -> usize {
        self.components()
            .iter()
            .map(|c| match &c.single {
                Single::Amb(_, b) => b.raw_seq_degree(),
                Single::Prefix(_, b) | Single::Abs(b) => 1 + b.raw_seq_degree(),
                Single::Msg(_, k) => 1 + k.as_ref().map_or(0, |k| k.raw_seq_degree()),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn depth_degree(&self) -> usize {
        self.components()
            .iter()
            .map(|c| match &c.single {
                Single::Amb(_, b) => 1 + b.depth_degree(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Names of top-level ambients.
    pub fn top_ambients(&self) -> BTreeSet<Name> {
        self.components()
            .iter()
            .filter_map(|c| match c.single {
                Single::Amb(Atom::Name(n), _) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Removes one instance of each listed component: plain components
    /// disappear, replicated ones stay (`!P ≡ !P | P`). Returns the
    /// remaining components unnormalized.
    pub fn without(&self, idxs: &[usize]) -> Vec<Component> {
        self.components()
            .iter()
            .enumerate()
            .filter(|(i, c)| c.replicated || !idxs.contains(i))
            .map(|(_, c)| c.clone())
            .collect()
    }
}

fn single_uses_index(s: &Single, k: u32) -> bool {
    let atom = |a: &Atom| *a == Atom::Bound(k);
    match s {
        Single::Prefix(c, b) => atom(&c.target) || b.uses_index(k),
        Single::Amb(a, b) => atom(a) || b.uses_index(k),
        Single::Msg(a, cont) => atom(a) || cont.as_ref().is_some_and(|c| c.uses_index(k)),
        Single::Abs(b) => b.uses_index(k + 1),
    }
}

fn collect(p: &Process, replicated: bool, out: &mut Vec<Component>) {
    let single = match p {
        Process::Nil => return,
        Process::Par(a, b) => {
            collect(a, replicated, out);
            collect(b, replicated, out);
            return;
        }
        Process::Repl(b) => {
            collect(b, true, out);
            return;
        }
        Process::Prefix(c, b) => Single::Prefix(*c, Canon::from_process(b)),
        Process::Amb(a, b) => Single::Amb(*a, Canon::from_process(b)),
        Process::Msg(a, k) => Single::Msg(*a, k.as_ref().map(|k| Canon::from_process(k))),
        Process::Abs(b) => Single::Abs(Canon::from_process(b)),
    };
    out.push(Component { single, replicated });
}

impl PartialEq for Canon {
    fn eq(&self, other: &Canon) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.comps == other.0.comps)
    }
}

impl Eq for Canon {}

impl Hash for Canon {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Canon {
    fn partial_cmp(&self, other: &Canon) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Canon {
    fn cmp(&self, other: &Canon) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.comps.cmp(&other.0.comps)
    }
}

impl fmt::Display for Canon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_process())
    }
}

impl fmt::Debug for Canon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_process())
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_process())
    }
}

impl fmt::Debug for Single {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_process())
    }
}

impl From<&Process> for Canon {
    fn from(p: &Process) -> Canon {
        Canon::from_process(p)
    }
}

/// Capability of a single, when it is a prefix with a name target.
pub fn prefix_of(s: &Single) -> Option<(CapKind, Name, &Canon)> {
    match s {
        Single::Prefix(
            Capability {
                kind,
                target: Atom::Name(n),
            },
            b,
        ) => Some((*kind, *n, b)),
        _ => None,
    }
}
