//! Executable checks of the encoding: macro step counts, ribbon growth,
//! cleaning, one-step simulation and the loop search.

use std::collections::{HashSet, VecDeque};

use super::encode::{Encoder, Macro};
use super::machine::{tm_step, Digit, TmConfig, TuringMachine, Word};
use crate::congruence::{Canon, Single};
use crate::error::Error;
use crate::semantics::{Engine, Fuel, Verdict};
use crate::syntax::{build, parse_process, Atom, Mode, Name, Process};

/// Outcome of one breadth-first search for a target.
#[derive(Clone, Debug)]
pub struct Search {
    pub found: Option<usize>,
    pub complete: bool,
    pub states: usize,
}

impl Search {
    pub fn verdict(&self) -> Verdict {
        match (self.found, self.complete) {
            (Some(_), _) => Verdict::True,
            (None, true) => Verdict::False,
            (None, false) => {
                Verdict::Unknown(format!("target not met within {} states", self.states))
            }
        }
    }
}

/// Breadth-first search from `start` until `hit` holds. `found` is the
/// depth of the first hit. `visit` sees every state and may abort the
/// search by returning false.
pub fn search(
    engine: &Engine,
    start: &Canon,
    max_states: usize,
    max_depth: usize,
    hit: &mut dyn FnMut(&Canon) -> bool,
    visit: &mut dyn FnMut(&Canon) -> bool,
) -> Search {
    let mut seen: HashSet<Canon> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start.clone(), 0usize));
    let mut complete = true;
    while let Some((s, depth)) = queue.pop_front() {
        if !visit(&s) {
            return Search {
                found: None,
                complete: true,
                states: seen.len(),
            };
        }
        if hit(&s) {
            return Search {
                found: Some(depth),
                complete,
                states: seen.len(),
            };
        }
        if depth >= max_depth {
            if !engine.is_blocked(&s) {
                complete = false;
            }
            continue;
        }
        for (_, t) in engine.reductions(&s).iter() {
            if seen.contains(t) {
                continue;
            }
            if seen.len() >= max_states {
                complete = false;
                continue;
            }
            seen.insert(t.clone());
            queue.push_back((t.clone(), depth + 1));
        }
    }
    Search {
        found: None,
        complete,
        states: seen.len(),
    }
}

fn canon(p: &Process) -> Canon {
    Canon::from_process(p)
}

fn parse(src: &str) -> Process {
    parse_process(src, Mode::Async).expect("internal term")
}

/// The two-state machine that accepts at once on `ff` and loops on `tt`.
pub fn immediate_accept_machine() -> TuringMachine {
    TuringMachine::parse("states: q0 qa\nstart: q0\naccept: qa\nq0 f -> qa f S\nq0 t -> q0 t S\n")
        .unwrap()
}

/// The two-state machine that never reaches its accepting state.
pub fn never_accept_machine() -> TuringMachine {
    TuringMachine::parse("states: q0 qa\nstart: q0\naccept: qa\nq0 f -> q0 f S\nq0 t -> q0 t S\n")
        .unwrap()
}

/// Step count for one setup of the state evolution lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroStep {
    pub name: &'static str,
    pub expected: usize,
    /// Reductions until the expected end state, if reached.
    pub steps: Option<usize>,
    /// Every intermediate level held exactly one live state.
    pub strict: bool,
    /// At the final level the end state is the only live state.
    pub confluent: bool,
}

impl MacroStep {
    pub fn ok(&self) -> bool {
        self.steps == Some(self.expected) && self.confluent
    }
}

/// Level-by-level evolution: blocked non-target reducts are dropped, as
/// licensed for the unchosen branch of a choice.
fn count_steps(
    engine: &Engine,
    start: &Canon,
    target: &Canon,
    limit: usize,
) -> (Option<usize>, bool, bool) {
    let mut level = vec![start.clone()];
    let mut strict = true;
    for k in 1..=limit {
        let mut next: Vec<Canon> = Vec::new();
        for s in &level {
            for (_, t) in engine.reductions(s).iter() {
                if (t == target || !engine.is_blocked(t)) && !next.contains(t) {
                    next.push(t.clone());
                }
            }
        }
        if next.contains(target) {
            return (Some(k), strict, next.len() == 1);
        }
        if next.len() != 1 {
            strict = false;
        }
        if next.is_empty() {
            return (None, strict, false);
        }
        level = next;
    }
    (None, strict, false)
}

fn fresh_marker(machine: &TuringMachine, base: &str) -> String {
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|s| !machine.states.contains(s))
        .unwrap()
}

/// Runs the four setups of the state evolution lemma for `d`, `d2` and
/// `w`, using the immediate-accept machine for `TM[tmsoup]`.
pub fn verify_macro_steps(d: Digit, d2: Digit, w: &[Digit]) -> Result<Vec<MacroStep>, Error> {
    verify_macro_steps_with(&immediate_accept_machine(), d, d2, w)
}

pub fn verify_macro_steps_with(
    machine: &TuringMachine,
    d: Digit,
    d2: Digit,
    w: &[Digit],
) -> Result<Vec<MacroStep>, Error> {
    let enc = Encoder::new(machine, w.len())?;
    let p = build::amb(&fresh_marker(machine, "cont_p"), build::nil());
    let q = build::amb(&fresh_marker(machine, "cont_q"), build::nil());
    let pt = |x: &Process| format!("({x})");
    let dn = d.name();
    let ext_dead = enc.encode(&Macro::ExtensorDead)?;
    let m = format!(
        "{dn}[0] | !open wo | {}",
        pt(&enc.encode(&Macro::Word(w.to_vec(), ext_dead))?)
    );
    let soup = pt(&enc.encode(&Macro::TmSoup)?);
    let rest = |with_d: bool| {
        let digit = if with_d {
            format!("{dn}[0] | ")
        } else {
            String::new()
        };
        format!("{digit}!open wo | cell[{m}] | TM[{soup}]")
    };
    let coin = format!("coin[in {}.{}]", d2.name(), pt(&q));

    let choice = match d {
        Digit::Ff => Macro::Choice(p.clone(), q.clone()),
        Digit::Tt => Macro::Choice(q.clone(), p.clone()),
    };
    let nd = d.flip().name();
    let setups = [
        (
            "choice",
            3,
            format!("head[{}] | {}", pt(&enc.encode(&choice)?), rest(true)),
            format!(
                "head[{} | coin[in {nd}.out {nd}.{}]] | {}",
                pt(&p),
                pt(&q),
                rest(true)
            ),
        ),
        (
            "clear",
            5,
            format!(
                "head[{} | {coin}] | {}",
                pt(&enc.encode(&Macro::Clear(d, p.clone()))?),
                rest(true)
            ),
            format!("head[{} | {coin}] | {}", pt(&p), rest(false)),
        ),
        (
            "write",
            4,
            format!(
                "head[{} | {coin}] | {}",
                pt(&enc.encode(&Macro::Write(d, p.clone()))?),
                rest(false)
            ),
            format!("head[{} | {coin}] | {}", pt(&p), rest(true)),
        ),
        (
            "become",
            3,
            format!(
                "head[{} | {coin}] | {}",
                pt(&enc.encode(&Macro::Become(p.clone()))?),
                rest(true)
            ),
            format!("mo[{} | {coin}] | {}", pt(&p), rest(true)),
        ),
    ];
    let engine = Engine::new(Fuel::DEFAULT);
    Ok(setups
        .into_iter()
        .map(|(name, expected, start, target)| {
            let (steps, strict, confluent) =
                count_steps(&engine, &canon(&parse(&start)), &canon(&parse(&target)), 16);
            MacroStep {
                name,
                expected,
                steps,
                strict,
                confluent,
            }
        })
        .collect())
}

fn is_ribbon(c: &Canon) -> bool {
    let ribbon = Atom::Name(Name::new("ribbon_left"));
    matches!(c.components(), [comp] if !comp.replicated && matches!(&comp.single, Single::Amb(n, _) if *n == ribbon))
}

fn with_ffs(w: &[Digit], n: usize) -> Word {
    let mut v = w.to_vec();
    v.extend(std::iter::repeat_n(Digit::Ff, n));
    v
}

/// Ribbon evolution from `GrowingRibb(w.ff^n)`: reaches both the next
/// growing ribbon and the work ribbon with its start message, and every
/// visited state is a single `ribbon_left` ambient.
pub fn ribbon_grow_check(w: &[Digit], n: usize, fuel: Fuel) -> Verdict {
    let machine = immediate_accept_machine();
    let enc = Encoder::new(&machine, w.len()).expect("fixed machine");
    let wn = with_ffs(w, n);
    let start = canon(&enc.encode(&Macro::GrowingRibb(wn.clone())).unwrap());
    let next = canon(&enc.encode(&Macro::GrowingRibb(with_ffs(w, n + 1))).unwrap());
    let msg = parse("msg[!out cell | out ribbon_left.start[in TM]]");
    let work = canon(&enc.encode(&Macro::WorkRibb(Vec::new(), wn, msg)).unwrap());
    let engine = Engine::new(fuel);
    let (mut saw_next, mut saw_work, mut shape_ok) = (false, false, true);
    let s = search(
        &engine,
        &start,
        fuel.max_states,
        fuel.max_depth,
        &mut |c| {
            saw_next |= *c == next;
            saw_work |= *c == work;
            saw_next && saw_work
        },
        &mut |c| {
            shape_ok &= is_ribbon(c);
            shape_ok
        },
    );
    if !shape_ok {
        return Verdict::False;
    }
    s.verdict()
}

/// `WorkRibb(w, ε)[0] | cleaner[in ribbon_left] ⇒ OldRibb`.
pub fn cleaner_check(w: &[Digit], fuel: Fuel) -> Verdict {
    let machine = immediate_accept_machine();
    let enc = Encoder::new(&machine, w.len()).expect("fixed machine");
    let work = enc
        .encode(&Macro::WorkRibb(w.to_vec(), Vec::new(), build::nil()))
        .unwrap();
    let start = canon(&Process::par(work, parse("cleaner[in ribbon_left]")));
    let old = canon(&enc.encode(&Macro::OldRibb).unwrap());
    let engine = Engine::new(fuel);
    search(
        &engine,
        &start,
        fuel.max_states,
        fuel.max_depth,
        &mut |c| *c == old,
        &mut |_| true,
    )
    .verdict()
}

/// Encoding of `c` reduces to the encoding of its successor. `False`
/// when the machine step is undefined and the encoding never reaches any
/// configuration of the machine.
pub fn step_check(
    machine: &TuringMachine,
    c: &TmConfig,
    w: &[Digit],
    fuel: Fuel,
) -> Result<Verdict, Error> {
    let enc = Encoder::new(machine, w.len())?;
    let start = canon(&enc.configuration(c)?);
    let engine = Engine::new(fuel);
    let Some(next) = tm_step(c, machine)? else {
        return Ok(Verdict::False);
    };
    let target = canon(&enc.configuration(&next)?);
    Ok(search(
        &engine,
        &start,
        fuel.max_states,
        fuel.max_depth,
        &mut |s| *s == target,
        &mut |_| true,
    )
    .verdict())
}

/// Both legs of the loop lemma.
#[derive(Clone, Debug)]
pub struct LoopReport {
    pub forward: Search,
    pub backward: Search,
}

impl LoopReport {
    /// `P1 ⇒ P0` when `P0 ⇒ P1` is confirmed.
    pub fn verdict(&self) -> Verdict {
        match self.forward.verdict() {
            Verdict::True => self.backward.verdict(),
            Verdict::False => Verdict::Unknown("forward leg P0 => P1 not found".into()),
            u => u,
        }
    }
}

/// Builds `P0 = Q | GrowingRibb(w)` and `P1 = Q | GrowingRibb(w.ff)` and
/// searches both legs. Only `fuel.max_states` bounds the search.
pub fn loop_search(machine: &TuringMachine, w: &[Digit], fuel: Fuel) -> Result<LoopReport, Error> {
    let enc = Encoder::new(machine, w.len())?;
    let q = enc.loop_context(w)?;
    let p0 = canon(&Process::par(
        q.clone(),
        enc.encode(&Macro::GrowingRibb(w.to_vec()))?,
    ));
    let p1 = canon(&Process::par(
        q,
        enc.encode(&Macro::GrowingRibb(with_ffs(w, 1)))?,
    ));
    let engine = Engine::new(fuel);
    let forward = search(
        &engine,
        &p0,
        fuel.max_states,
        usize::MAX,
        &mut |c| *c == p1,
        &mut |_| true,
    );
    let backward = search(
        &engine,
        &p1,
        fuel.max_states,
        usize::MAX,
        &mut |c| *c == p0,
        &mut |_| true,
    );
    Ok(LoopReport { forward, backward })
}

pub fn loop_check(machine: &TuringMachine, w: &[Digit], fuel: Fuel) -> Verdict {
    match loop_search(machine, w, fuel) {
        Ok(r) => r.verdict(),
        Err(e) => Verdict::Unknown(e.to_string()),
    }
}
