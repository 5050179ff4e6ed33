//! Shared generators for the integration tests: random terms, axiom
//! rewrites, eta expansions, small-term enumeration and random formulas.
#![allow(dead_code)]

use ambients::logic::Formula;
use ambients::syntax::{Atom, CapKind, Capability, Name, Process, Variable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NAMES: &[&str] = &["a", "b", "n"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random process generator.
///
/// `repl` allows replication; with `guarded_repl` false it only appears
/// outside prefixes and abstractions, which keeps terms in MA^s_IF.
pub struct Gen {
    pub rng: ChaCha8Rng,
    pub repl: bool,
    pub guarded_repl: bool,
    pub sync: bool,
}

impl Gen {
    pub fn finite(seed: u64) -> Gen {
        Gen {
            rng: rng(seed),
            repl: false,
            guarded_repl: false,
            sync: false,
        }
    }

    pub fn maifs(seed: u64) -> Gen {
        Gen {
            rng: rng(seed),
            repl: true,
            guarded_repl: false,
            sync: false,
        }
    }

    pub fn any(seed: u64) -> Gen {
        Gen {
            rng: rng(seed),
            repl: true,
            guarded_repl: true,
            sync: false,
        }
    }

    fn atom(&mut self, vars: u32) -> Atom {
        if vars > 0 && self.rng.gen_bool(0.4) {
            Atom::Bound(self.rng.gen_range(0..vars))
        } else {
            Atom::name(NAMES[self.rng.gen_range(0..NAMES.len())])
        }
    }

    fn cap(&mut self, vars: u32) -> Capability {
        let kind = [CapKind::In, CapKind::Out, CapKind::Open][self.rng.gen_range(0..3)];
        Capability::new(kind, self.atom(vars))
    }

    pub fn process(&mut self, depth: u32) -> Process {
        self.go(depth, 0, false)
    }

    fn go(&mut self, depth: u32, vars: u32, guarded: bool) -> Process {
        if depth == 0 {
            return match self.rng.gen_range(0..4) {
                0 | 1 => Process::Nil,
                2 => self.message(vars, depth),
                _ => Process::amb(
                    Atom::name(NAMES[self.rng.gen_range(0..NAMES.len())]),
                    Process::Nil,
                ),
            };
        }
        let repl_ok = self.repl && (self.guarded_repl || !guarded);
        match self.rng.gen_range(0..if repl_ok { 9 } else { 8 }) {
            0 => Process::Nil,
            1 | 2 => Process::par(
                self.go(depth - 1, vars, guarded),
                self.go(depth - 1, vars, guarded),
            ),
            3 => {
                let c = self.cap(vars);
                Process::prefix(c, self.go(depth - 1, vars, true))
            }
            4 => {
                let n = self.atom(vars);
                Process::amb(n, self.go(depth - 1, vars, guarded))
            }
            5 => self.message(vars, depth),
            6 => {
                if !self.sync && self.rng.gen_bool(0.3) {
                    // An eta redex shape (x)((x)P | <x>).
                    let body = self.go(depth - 1, vars + 1, true);
                    eta_expand_body(body)
                } else {
                    Process::Abs(Box::new(self.go(depth - 1, vars + 1, true)))
                }
            }
            7 => Process::amb(
                Atom::name(NAMES[self.rng.gen_range(0..NAMES.len())]),
                self.go(depth - 1, vars, guarded),
            ),
            _ => Process::repl(self.go(depth - 1, vars, guarded)),
        }
    }

    fn message(&mut self, vars: u32, depth: u32) -> Process {
        let a = self.atom(vars);
        if self.sync {
            let k = if depth == 0 {
                Process::Nil
            } else {
                self.go(depth - 1, vars, true)
            };
            Process::msg_then(a, k)
        } else {
            Process::msg(a)
        }
    }
}

/// `(x)P` becomes `(x)((y)P | <x>)`, an eta-equivalent term. `body` is
/// the body of the abstraction, with its own binder at index 0.
pub fn eta_expand_body(body: Process) -> Process {
    let inner = Process::Abs(Box::new(body.shift(1, 1)));
    Process::Abs(Box::new(Process::par(inner, Process::msg(Atom::Bound(0)))))
}

fn node_count(p: &Process) -> usize {
    1 + match p {
        Process::Nil | Process::Msg(_, None) => 0,
        Process::Par(a, b) => node_count(a) + node_count(b),
        Process::Repl(a)
        | Process::Prefix(_, a)
        | Process::Amb(_, a)
        | Process::Abs(a)
        | Process::Msg(_, Some(a)) => node_count(a),
    }
}

/// Applies one congruence axiom at a random position.
pub fn axiom_rewrite(rng: &mut ChaCha8Rng, p: &Process) -> Process {
    let k = rng.gen_range(0..node_count(p));
    let choice = rng.gen_range(0..16u32);
    let mut counter = 0;
    rewrite_at(p, k, &mut counter, choice)
}

fn rewrite_at(p: &Process, k: usize, counter: &mut usize, choice: u32) -> Process {
    let here = *counter;
    *counter += 1;
    if here == k {
        return apply_axiom(p, choice);
    }
    let mut sub = |a: &Process| Box::new(rewrite_at(a, k, counter, choice));
    match p {
        Process::Nil | Process::Msg(_, None) => p.clone(),
        Process::Par(a, b) => {
            let a2 = sub(a);
            let b2 = sub(b);
            Process::Par(a2, b2)
        }
        Process::Repl(a) => Process::Repl(sub(a)),
        Process::Prefix(c, a) => Process::Prefix(*c, sub(a)),
        Process::Amb(n, a) => Process::Amb(*n, sub(a)),
        Process::Abs(a) => Process::Abs(sub(a)),
        Process::Msg(n, Some(a)) => Process::Msg(*n, Some(sub(a))),
    }
}

fn apply_axiom(p: &Process, choice: u32) -> Process {
    use Process::*;
    let b = |x: &Process| Box::new(x.clone());
    match (p, choice % 8) {
        (Par(a, c), 0) => Par(b(c), b(a)),
        (Par(x, c), 1) if matches!(**x, Par(..)) => {
            let Par(a, m) = &**x else { unreachable!() };
            Par(b(a), Box::new(Par(b(m), b(c))))
        }
        (Par(a, x), 2) if matches!(**x, Par(..)) => {
            let Par(m, c) = &**x else { unreachable!() };
            Par(Box::new(Par(b(a), b(m))), b(c))
        }
        (Repl(a), 3) => Par(b(p), b(a)),
        (Repl(a), 4) if matches!(**a, Repl(_)) => (**a).clone(),
        (Repl(_), 4) => Repl(b(p)),
        (Repl(x), 5) if matches!(**x, Par(..)) => {
            let Par(m, c) = &**x else { unreachable!() };
            Par(Box::new(Repl(b(m))), Box::new(Repl(b(c))))
        }
        (Par(x, y), 5) if matches!((&**x, &**y), (Repl(_), Repl(_))) => {
            let (Repl(m), Repl(c)) = (&**x, &**y) else {
                unreachable!()
            };
            Repl(Box::new(Par(b(m), b(c))))
        }
        (Repl(a), 6) if matches!(**a, Nil) => Nil,
        (Nil, 6) => Repl(Box::new(Nil)),
        (Par(a, x), 7) if matches!(**x, Nil) => (**a).clone(),
        (_, 7) => Par(b(p), Box::new(Nil)),
        _ => Par(Box::new(Nil), b(p)),
    }
}

/// Replaces one random abstraction `(x)P` by `(x)((y)P | <x>)`. Returns
/// the input when there is no abstraction.
pub fn eta_expand_random(rng: &mut ChaCha8Rng, p: &Process) -> Process {
    let abs = count_abs(p);
    if abs == 0 {
        return p.clone();
    }
    let k = rng.gen_range(0..abs);
    let mut counter = 0;
    expand_at(p, k, &mut counter)
}

fn count_abs(p: &Process) -> usize {
    match p {
        Process::Nil | Process::Msg(_, None) => 0,
        Process::Par(a, b) => count_abs(a) + count_abs(b),
        Process::Abs(a) => 1 + count_abs(a),
        Process::Repl(a)
        | Process::Prefix(_, a)
        | Process::Amb(_, a)
        | Process::Msg(_, Some(a)) => count_abs(a),
    }
}

fn expand_at(p: &Process, k: usize, counter: &mut usize) -> Process {
    if let Process::Abs(a) = p {
        let here = *counter;
        *counter += 1;
        if here == k {
            return eta_expand_body((**a).clone());
        }
    }
    let mut sub = |a: &Process| Box::new(expand_at(a, k, counter));
    match p {
        Process::Abs(a) => Process::Abs(sub(a)),
        Process::Nil | Process::Msg(_, None) => p.clone(),
        Process::Par(a, b) => {
            let a2 = sub(a);
            let b2 = sub(b);
            Process::Par(a2, b2)
        }
        Process::Repl(a) => Process::Repl(sub(a)),
        Process::Prefix(c, a) => Process::Prefix(*c, sub(a)),
        Process::Amb(n, a) => Process::Amb(*n, sub(a)),
        Process::Msg(n, Some(a)) => Process::Msg(*n, Some(sub(a))),
    }
}

/// Every closed async term with exactly `size` nodes over the name `n`,
/// capabilities `in n` and `open n`, and replication when `repl` is set.
pub fn enumerate(size: usize, vars: u32, repl: bool) -> Vec<Process> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    let atoms: Vec<Atom> = std::iter::once(Atom::name("n"))
        .chain((0..vars).map(Atom::Bound))
        .collect();
    if size == 1 {
        out.push(Process::Nil);
        for a in &atoms {
            out.push(Process::msg(*a));
        }
        return out;
    }
    for body in enumerate(size - 1, vars, repl) {
        for a in &atoms {
            out.push(Process::amb(*a, body.clone()));
            for kind in [CapKind::In, CapKind::Open] {
                out.push(Process::prefix(Capability::new(kind, *a), body.clone()));
            }
        }
        if repl {
            out.push(Process::repl(body.clone()));
        }
    }
    for body in enumerate(size - 1, vars + 1, repl) {
        out.push(Process::Abs(Box::new(body)));
    }
    for left in 1..size - 1 {
        let ls = enumerate(left, vars, repl);
        let rs = enumerate(size - 1 - left, vars, repl);
        for l in &ls {
            for r in &rs {
                out.push(Process::par(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Random closed formula over [`NAMES`].
pub fn formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    form(rng, depth, &mut Vec::new())
}

fn form_atom(rng: &mut ChaCha8Rng, vars: &[Variable]) -> Atom {
    if !vars.is_empty() && rng.gen_bool(0.5) {
        Atom::Free(vars[rng.gen_range(0..vars.len())])
    } else {
        Atom::name(NAMES[rng.gen_range(0..NAMES.len())])
    }
}

fn form(rng: &mut ChaCha8Rng, depth: u32, vars: &mut Vec<Variable>) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Formula::True,
            1 => Formula::Void,
            2 => Formula::MsgF(form_atom(rng, vars)),
            _ => Formula::FreeName(form_atom(rng, vars)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..13) {
        0 => Formula::not(form(rng, d, vars)),
        1 => Formula::or(form(rng, d, vars), form(rng, d, vars)),
        2 => Formula::and(form(rng, d, vars), form(rng, d, vars)),
        3 => Formula::amb(form_atom(rng, vars), form(rng, d, vars)),
        4 => Formula::par(form(rng, d, vars), form(rng, d, vars)),
        5 => Formula::sometime(form(rng, d, vars)),
        6 => Formula::at(form(rng, d, vars), form_atom(rng, vars)),
        7 => {
            let kind = [CapKind::In, CapKind::Out, CapKind::Open][rng.gen_range(0..3)];
            let c = Capability::new(kind, form_atom(rng, vars));
            if rng.gen_bool(0.5) {
                Formula::cap_diamond(c, form(rng, d, vars))
            } else {
                Formula::cap_box(c, form(rng, d, vars))
            }
        }
        8 => {
            let n = form_atom(rng, vars);
            if rng.gen_bool(0.5) {
                Formula::in_diamond(n, form(rng, d, vars))
            } else {
                Formula::in_box(n, form(rng, d, vars))
            }
        }
        9 => {
            let x = Variable::new(&format!("x{}", vars.len()));
            vars.push(x);
            let body = form(rng, d, vars);
            vars.pop();
            if rng.gen_bool(0.5) {
                Formula::forall(x, body)
            } else {
                Formula::exists(x, body)
            }
        }
        10 => Formula::MsgF(form_atom(rng, vars)),
        _ => form(rng, 0, vars),
    }
}

/// All names of [`NAMES`] as a name set.
pub fn name_set() -> std::collections::BTreeSet<Name> {
    NAMES.iter().map(|s| Name::new(s)).collect()
}

/// Proptest strategy for closed processes, finite or not.
pub fn arb_process() -> impl Strategy<Value = Process> {
    (any::<u64>(), 0u32..5).prop_map(|(seed, depth)| Gen::any(seed).process(depth))
}

pub fn arb_finite() -> impl Strategy<Value = Process> {
    (any::<u64>(), 0u32..4).prop_map(|(seed, depth)| Gen::finite(seed).process(depth))
}

impl Gen {
    /// Parallel composition of `k` random components, which makes
    /// redexes between components likely.
    pub fn soup(&mut self, k: usize, depth: u32) -> Process {
        Process::par_all((0..k).map(|_| self.process(depth)))
    }
}

/// Collects at least `count` reduction edges `P -> Q` from the reachable
/// graphs of random finite soups.
pub fn reduction_edges(
    seed: u64,
    count: usize,
) -> Vec<(ambients::congruence::Canon, ambients::congruence::Canon)> {
    use ambients::congruence::Canon;
    use ambients::semantics::reductions;
    use std::collections::BTreeSet;
    let mut edges = Vec::new();
    let mut s = seed;
    while edges.len() < count {
        let p = Gen::finite(s).soup(3, 2);
        s += 1;
        let mut seen: BTreeSet<Canon> = BTreeSet::new();
        let mut todo = vec![Canon::from_process(&p)];
        while let Some(c) = todo.pop() {
            if !seen.insert(c.clone()) || seen.len() > 200 {
                continue;
            }
            for (_, d) in reductions(&c) {
                edges.push((c.clone(), d.clone()));
                todo.push(d);
            }
        }
    }
    edges
}
