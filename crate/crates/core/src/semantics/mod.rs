//! Reduction, labelled transitions, stuttering, barbs and deterministic
//! evolution.

mod reduce;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

pub use reduce::{reductions, Rule};

use crate::congruence::{prefix_of, Canon, Single};
use crate::error::Error;
use crate::syntax::{fresh_name, Atom, CapKind, Capability, Name, Process};

/// Exploration bounds. Zero states means no exploration at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fuel {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Fuel {
    pub const DEFAULT: Fuel = Fuel {
        max_states: 100_000,
        max_depth: 64,
    };

    pub fn new(max_states: usize, max_depth: usize) -> Fuel {
        Fuel {
            max_states,
            max_depth,
        }
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::DEFAULT
    }
}

/// Three-valued answer. `Unknown` is only produced when fuel ran out.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown(String),
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(&self) -> bool {
        *self == Verdict::True
    }

    pub fn is_false(&self) -> bool {
        *self == Verdict::False
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown(_) => None,
        }
    }

    /// Kleene conjunction.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::False => Verdict::False,
            Verdict::True => other(),
            Verdict::Unknown(r) => match other() {
                Verdict::False => Verdict::False,
                _ => Verdict::Unknown(r),
            },
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::True => Verdict::True,
            Verdict::False => other(),
            Verdict::Unknown(r) => match other() {
                Verdict::True => Verdict::True,
                _ => Verdict::Unknown(r),
            },
        }
    }

    pub fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            u => u,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => f.write_str("true"),
            Verdict::False => f.write_str("false"),
            Verdict::Unknown(r) => write!(f, "unknown:{r}"),
        }
    }
}

/// Accumulates an existential search: `True` as soon as a witness is found,
/// `False` only if every candidate failed and the candidate set was complete.
pub(crate) struct Exists {
    unknown: Option<String>,
}

impl Exists {
    pub fn new(complete: bool, what: &str) -> Exists {
        Exists {
            unknown: (!complete).then(|| format!("fuel exhausted exploring {what}")),
        }
    }

    /// Feeds one candidate; returns true when the search can stop.
    pub fn push(&mut self, v: Verdict) -> bool {
        match v {
            Verdict::True => true,
            Verdict::False => false,
            Verdict::Unknown(r) => {
                self.unknown.get_or_insert(r);
                false
            }
        }
    }

    pub fn finish(self, found: bool) -> Verdict {
        if found {
            Verdict::True
        } else if let Some(r) = self.unknown {
            Verdict::Unknown(r)
        } else {
            Verdict::False
        }
    }
}

/// Observation labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionLabel {
    Cap(Capability),
    MsgOut(Name),
    MsgIn(Name),
    Tau,
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Cap(c) => write!(f, "{c}"),
            TransitionLabel::MsgOut(n) => write!(f, "<{n}>"),
            TransitionLabel::MsgIn(n) => write!(f, "?{n}"),
            TransitionLabel::Tau => f.write_str("tau"),
        }
    }
}

/// A set of states reached by an exploration.
#[derive(Clone, Debug, Default)]
pub struct Reach {
    pub states: Vec<Canon>,
    pub complete: bool,
}

impl Reach {
    pub fn contains(&self, c: &Canon) -> bool {
        self.states.contains(c)
    }
}

const STEP_MEMO_LIMIT: usize = 400_000;

type Steps = Rc<Vec<(Rule, Canon)>>;

/// Exploration engine with per-session memo tables.
///
/// Values are immutable; the memo tables only cache pure results, so one
/// engine can serve any number of queries on one thread.
pub struct Engine {
    fuel: Fuel,
    steps: RefCell<HashMap<Canon, Steps>>,
    stars: RefCell<HashMap<Canon, Rc<Reach>>>,
    stutters: RefCell<HashMap<(Canon, Capability), Rc<Reach>>>,
}

impl Engine {
    pub fn new(fuel: Fuel) -> Engine {
        Engine {
            fuel,
            steps: RefCell::new(HashMap::new()),
            stars: RefCell::new(HashMap::new()),
            stutters: RefCell::new(HashMap::new()),
        }
    }

    pub fn fuel(&self) -> Fuel {
        self.fuel
    }

    /// One-step reducts, memoized (ambient bodies included).
    pub fn reductions(&self, p: &Canon) -> Steps {
        if let Some(hit) = self.steps.borrow().get(p) {
            return hit.clone();
        }
        let v = Rc::new(reduce::reductions_with(p, &|r| {
            (*self.reductions(r)).clone()
        }));
        let mut memo = self.steps.borrow_mut();
        if memo.len() > STEP_MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(p.clone(), v.clone());
        v
    }

    pub fn is_blocked(&self, p: &Canon) -> bool {
        self.reductions(p).is_empty()
    }

    /// Breadth-first closure under reduction.
    pub fn reduce_star(&self, p: &Canon) -> Rc<Reach> {
        if let Some(hit) = self.stars.borrow().get(p) {
            return hit.clone();
        }
        let r = Rc::new(self.explore(p));
        self.stars.borrow_mut().insert(p.clone(), r.clone());
        r
    }

    fn explore(&self, start: &Canon) -> Reach {
        let Fuel {
            max_states,
            max_depth,
        } = self.fuel;
        if max_states == 0 {
            return Reach {
                states: Vec::new(),
                complete: false,
            };
        }
        let mut seen: HashSet<Canon> = HashSet::new();
        seen.insert(start.clone());
        let mut states = vec![start.clone()];
        let mut frontier = vec![start.clone()];
        let mut depth = 0;
        while !frontier.is_empty() {
            if depth >= max_depth {
                let complete = frontier.iter().all(|s| self.is_blocked(s));
                return Reach { states, complete };
            }
            let mut next = Vec::new();
            for s in &frontier {
                for (_, t) in self.reductions(s).iter() {
                    if seen.contains(t) {
                        continue;
                    }
                    if states.len() >= max_states {
                        return Reach {
                            states,
                            complete: false,
                        };
                    }
                    seen.insert(t.clone());
                    states.push(t.clone());
                    next.push(t.clone());
                }
            }
            frontier = next;
            depth += 1;
        }
        Reach {
            states,
            complete: true,
        }
    }

    /// Strong transitions `p --label--> q` for a single label.
    pub fn label_step(&self, p: &Canon, label: TransitionLabel) -> Vec<Canon> {
        let mut out = Vec::new();
        match label {
            TransitionLabel::Tau => {
                return self.reductions(p).iter().map(|(_, q)| q.clone()).collect()
            }
            TransitionLabel::Cap(cap) => {
                let Atom::Name(target) = cap.target else {
                    return out;
                };
                for (i, c) in p.components().iter().enumerate() {
                    if let Some((kind, n, body)) = prefix_of(&c.single) {
                        if kind == cap.kind && n == target {
                            let mut rest = p.without(&[i]);
                            rest.extend_from_slice(body.components());
                            out.push(Canon::from_components(rest));
                        }
                    }
                }
            }
            TransitionLabel::MsgOut(n) => {
                for (i, c) in p.components().iter().enumerate() {
                    if let Single::Msg(Atom::Name(m), k) = &c.single {
                        if *m == n {
                            let mut rest = p.without(&[i]);
                            if let Some(k) = k {
                                rest.extend_from_slice(k.components());
                            }
                            out.push(Canon::from_components(rest));
                        }
                    }
                }
            }
            TransitionLabel::MsgIn(n) => {
                for (i, c) in p.components().iter().enumerate() {
                    if let Single::Abs(body) = &c.single {
                        let mut rest = p.without(&[i]);
                        rest.extend_from_slice(body.instantiate(n).components());
                        out.push(Canon::from_components(rest));
                    }
                }
            }
        }
        dedup(out)
    }

    /// All strong labelled transitions (excluding Tau). Inputs are probed
    /// with the free names of `p` plus one fresh name.
    pub fn labelled_transitions(&self, p: &Canon) -> Vec<(TransitionLabel, Canon)> {
        let mut labels: Vec<TransitionLabel> = Vec::new();
        let mut has_abs = false;
        for c in p.components() {
            match &c.single {
                Single::Prefix(cap, _) if matches!(cap.target, Atom::Name(_)) => {
                    labels.push(TransitionLabel::Cap(*cap))
                }
                Single::Msg(Atom::Name(n), _) => labels.push(TransitionLabel::MsgOut(*n)),
                Single::Abs(_) => has_abs = true,
                _ => {}
            }
        }
        if has_abs {
            let names = p.free_names();
            let fresh = fresh_name(&names, "fresh");
            labels.extend(names.iter().map(|n| TransitionLabel::MsgIn(*n)));
            labels.push(TransitionLabel::MsgIn(fresh));
        }
        labels.dedup();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in labels {
            for q in self.label_step(p, l) {
                if seen.insert((l, q.clone())) {
                    out.push((l, q));
                }
            }
        }
        out
    }

    /// `p ==> --label--> ==>`.
    pub fn weak_transition(&self, p: &Canon, label: TransitionLabel) -> Reach {
        let pre = self.reduce_star(p);
        if label == TransitionLabel::Tau {
            return (*pre).clone();
        }
        let mut complete = pre.complete;
        let mut seen: HashSet<Canon> = HashSet::new();
        let mut states = Vec::new();
        let mut mids: Vec<Canon> = Vec::new();
        for s in &pre.states {
            for m in self.label_step(s, label) {
                if !mids.contains(&m) {
                    mids.push(m);
                }
            }
        }
        'outer: for m in &mids {
            let post = self.reduce_star(m);
            complete &= post.complete;
            for t in &post.states {
                if seen.insert(t.clone()) {
                    if states.len() >= self.fuel.max_states {
                        complete = false;
                        break 'outer;
                    }
                    states.push(t.clone());
                }
            }
        }
        Reach { states, complete }
    }

    /// The stuttering closure `Rcap`: plain `==>` for `open n`,
    /// alternating `out n`/`in n` chains for `in n`, and `in n`/`out n`
    /// chains for `out n`. Always contains `p`.
    pub fn stutter_closure(&self, p: &Canon, cap: Capability) -> Rc<Reach> {
        let key = (p.clone(), cap);
        if let Some(hit) = self.stutters.borrow().get(&key) {
            return hit.clone();
        }
        let r = Rc::new(self.stutter_uncached(p, cap));
        self.stutters.borrow_mut().insert(key, r.clone());
        r
    }

    fn stutter_uncached(&self, p: &Canon, cap: Capability) -> Reach {
        let (first, second) = match cap.kind {
            CapKind::Open => return (*self.reduce_star(p)).clone(),
            CapKind::In => (CapKind::Out, CapKind::In),
            CapKind::Out => (CapKind::In, CapKind::Out),
        };
        let m1 = TransitionLabel::Cap(Capability::new(first, cap.target));
        let m2 = TransitionLabel::Cap(Capability::new(second, cap.target));
        let Fuel {
            max_states,
            max_depth,
        } = self.fuel;
        if max_states == 0 {
            return Reach {
                states: Vec::new(),
                complete: false,
            };
        }
        let mut seen: HashSet<Canon> = HashSet::new();
        seen.insert(p.clone());
        let mut states = vec![p.clone()];
        let mut frontier = vec![p.clone()];
        let mut complete = true;
        let mut depth = 0;
        while !frontier.is_empty() {
            if depth >= max_depth {
                complete = false;
                break;
            }
            let mut next = Vec::new();
            for x in &frontier {
                let ys = self.weak_transition(x, m1);
                complete &= ys.complete;
                for y in &ys.states {
                    let zs = self.weak_transition(y, m2);
                    complete &= zs.complete;
                    for z in zs.states {
                        if seen.contains(&z) {
                            continue;
                        }
                        if states.len() >= max_states {
                            return Reach {
                                states,
                                complete: false,
                            };
                        }
                        seen.insert(z.clone());
                        states.push(z.clone());
                        next.push(z);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        Reach { states, complete }
    }

    /// Weak barbs: names `n` with `p ==> n[P'] | P''`.
    pub fn barbs(&self, p: &Canon) -> (BTreeSet<Name>, bool) {
        let r = self.reduce_star(p);
        let mut out = BTreeSet::new();
        for s in &r.states {
            out.extend(s.top_ambients());
        }
        (out, r.complete)
    }

    /// `p ~> q`: `p -> q` and every other reduct is blocked or equal to `q`.
    pub fn det_step(&self, p: &Canon) -> Option<Canon> {
        let rs = self.reductions(p);
        let mut live: Vec<&Canon> = rs
            .iter()
            .map(|(_, q)| q)
            .filter(|q| !self.is_blocked(q))
            .collect();
        live.sort();
        live.dedup();
        match (live.as_slice(), rs.len()) {
            ([q], _) => Some((*q).clone()),
            ([], 1) => Some(rs[0].1.clone()),
            _ => None,
        }
    }
}

fn dedup(v: Vec<Canon>) -> Vec<Canon> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

fn closed(p: &Process, what: &str) -> Result<Canon, Error> {
    p.require_closed(what)?;
    Ok(Canon::from_process(p))
}

fn to_processes(v: &[Canon]) -> Vec<Process> {
    v.iter().map(Canon::to_process).collect()
}

pub fn reduce_once(p: &Process) -> Result<Vec<Process>, Error> {
    let c = closed(p, "reduce_once")?;
    Ok(reductions(&c).iter().map(|(_, q)| q.to_process()).collect())
}

pub fn reduce_star(p: &Process, fuel: Fuel) -> Result<(Vec<Process>, bool), Error> {
    let c = closed(p, "reduce_star")?;
    let r = Engine::new(fuel).reduce_star(&c);
    Ok((to_processes(&r.states), r.complete))
}

pub fn labelled_transitions(p: &Process) -> Result<Vec<(TransitionLabel, Process)>, Error> {
    let c = closed(p, "labelled_transitions")?;
    Ok(Engine::new(Fuel::DEFAULT)
        .labelled_transitions(&c)
        .into_iter()
        .map(|(l, q)| (l, q.to_process()))
        .collect())
}

pub fn weak_transition(
    p: &Process,
    label: TransitionLabel,
    fuel: Fuel,
) -> Result<(Vec<Process>, bool), Error> {
    let c = closed(p, "weak_transition")?;
    let r = Engine::new(fuel).weak_transition(&c, label);
    Ok((to_processes(&r.states), r.complete))
}

pub fn stutter_closure(
    p: &Process,
    cap: Capability,
    fuel: Fuel,
) -> Result<(Vec<Process>, bool), Error> {
    let c = closed(p, "stutter_closure")?;
    if !matches!(cap.target, Atom::Name(_)) {
        return Err(Error::OpenTerm(format!("capability target of {cap}")));
    }
    let r = Engine::new(fuel).stutter_closure(&c, cap);
    Ok((to_processes(&r.states), r.complete))
}

pub fn barbs(p: &Process, fuel: Fuel) -> Result<(BTreeSet<Name>, bool), Error> {
    let c = closed(p, "barbs")?;
    Ok(Engine::new(fuel).barbs(&c))
}

pub fn det_step(p: &Process) -> Result<Option<Process>, Error> {
    let c = closed(p, "det_step")?;
    Ok(Engine::new(Fuel::DEFAULT)
        .det_step(&c)
        .map(|q| q.to_process()))
}

/// One maximal run choosing the first reduct at each step, as
/// `(rule, process)` records. Stops when blocked or after `max_steps`.
pub fn trace(p: &Process, max_steps: usize) -> Result<Vec<(Rule, Process)>, Error> {
    let mut cur = closed(p, "trace")?;
    let mut out = Vec::new();
    for _ in 0..max_steps {
        let rs = reductions(&cur);
        let Some((rule, next)) = rs.into_iter().next() else {
            break;
        };
        out.push((rule, next.to_process()));
        cur = next;
    }
    Ok(out)
}
