//! Turing machines over the alphabet {ff, tt}, their text format and the
//! reference step function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::syntax::is_identifier;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Digit {
    Ff,
    Tt,
}

impl Digit {
    /// Ambient name carrying the digit.
    pub fn name(self) -> &'static str {
        match self {
            Digit::Ff => "ff",
            Digit::Tt => "tt",
        }
    }

    pub fn flip(self) -> Digit {
        match self {
            Digit::Ff => Digit::Tt,
            Digit::Tt => Digit::Ff,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Digit::Ff => 'f',
            Digit::Tt => 't',
        }
    }

    fn parse(s: &str) -> Option<Digit> {
        match s {
            "f" | "ff" => Some(Digit::Ff),
            "t" | "tt" => Some(Digit::Tt),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'S',
            Move::Right => 'R',
        }
    }
}

pub type Word = Vec<Digit>;

/// Parses a word written with `f` and `t`, e.g. `"ftf"`. The empty
/// string is the empty word.
pub fn parse_word(s: &str) -> Result<Word, Error> {
    s.chars()
        .map(|c| {
            Digit::parse(&c.to_string())
                .ok_or_else(|| Error::Machine(format!("'{c}' is not a digit (use f or t)")))
        })
        .collect()
}

pub fn word_string(w: &[Digit]) -> String {
    w.iter().map(|d| d.letter()).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TuringMachine {
    pub states: BTreeSet<String>,
    pub start: String,
    pub accept: String,
    pub delta: BTreeMap<(String, Digit), (String, Digit, Move)>,
}

impl TuringMachine {
    /// Checks the invariants: known states, identifiers only, total on
    /// non-accepting states, nothing out of the accepting state.
    pub fn new(
        states: impl IntoIterator<Item = String>,
        start: &str,
        accept: &str,
        delta: BTreeMap<(String, Digit), (String, Digit, Move)>,
    ) -> Result<TuringMachine, Error> {
        let states: BTreeSet<String> = states.into_iter().collect();
        for s in &states {
            if !is_identifier(s) {
                return Err(Error::Machine(format!("state '{s}' is not an identifier")));
            }
        }
        for s in [start, accept] {
            if !states.contains(s) {
                return Err(Error::Machine(format!("state '{s}' is not declared")));
            }
        }
        if start == accept {
            return Err(Error::Machine("start and accept states must differ".into()));
        }
        for ((q, _), (q2, _, _)) in &delta {
            if !states.contains(q) || !states.contains(q2) {
                return Err(Error::Machine(format!(
                    "transition mentions an undeclared state: {q} -> {q2}"
                )));
            }
            if q == accept {
                return Err(Error::Machine(format!(
                    "accepting state '{accept}' has an outgoing transition"
                )));
            }
        }
        for q in states.iter().filter(|q| *q != accept) {
            for d in [Digit::Ff, Digit::Tt] {
                if !delta.contains_key(&(q.clone(), d)) {
                    return Err(Error::Machine(format!(
                        "no transition for ({q}, {})",
                        d.letter()
                    )));
                }
            }
        }
        Ok(TuringMachine {
            states,
            start: start.to_string(),
            accept: accept.to_string(),
            delta,
        })
    }

    /// Reads the line format:
    ///
    /// ```text
    /// states: q0 qa
    /// start: q0
    /// accept: qa
    /// q0 f -> qa f S
    /// q0 t -> q0 t R
    /// ```
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<TuringMachine, Error> {
        let mut states = None;
        let mut start = None;
        let mut accept = None;
        let mut delta = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Machine(format!("line {}: {msg}", i + 1));
            if let Some(rest) = line.strip_prefix("states:") {
                states = Some(
                    rest.split_whitespace()
                        .map(str::to_string)
                        .collect::<Vec<_>>(),
                );
            } else if let Some(rest) = line.strip_prefix("start:") {
                start = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("accept:") {
                accept = Some(rest.trim().to_string());
            } else {
                let toks: Vec<&str> = line.split_whitespace().collect();
                let [q, r, "->", q2, w, mv] = toks.as_slice() else {
                    return Err(bad("expected 'state read -> state write move'"));
                };
                let r = Digit::parse(r).ok_or_else(|| bad("read digit must be f or t"))?;
                let w = Digit::parse(w).ok_or_else(|| bad("written digit must be f or t"))?;
                let mv = match *mv {
                    "L" => Move::Left,
                    "S" => Move::Stay,
                    "R" => Move::Right,
                    _ => return Err(bad("move must be L, S or R")),
                };
                if delta
                    .insert((q.to_string(), r), (q2.to_string(), w, mv))
                    .is_some()
                {
                    return Err(bad("duplicate transition"));
                }
            }
        }
        let states = states.ok_or_else(|| Error::Machine("missing 'states:' line".into()))?;
        let start = start.ok_or_else(|| Error::Machine("missing 'start:' line".into()))?;
        let accept = accept.ok_or_else(|| Error::Machine("missing 'accept:' line".into()))?;
        TuringMachine::new(states, &start, &accept, delta)
    }

    pub fn transition(&self, q: &str, d: Digit) -> Option<&(String, Digit, Move)> {
        self.delta.get(&(q.to_string(), d))
    }

    /// Runs from `(w[0], start, w[1..])` for at most `max_steps` steps.
    /// `Some(true)` on acceptance, `Some(false)` when the head falls off
    /// the ribbon, `None` when out of steps.
    pub fn accepts(&self, w: &[Digit], max_steps: usize) -> Option<bool> {
        let Some((first, rest)) = w.split_first() else {
            return Some(false);
        };
        let mut c = TmConfig {
            left: vec![*first],
            state: self.start.clone(),
            right: rest.to_vec(),
        };
        for _ in 0..max_steps {
            if c.state == self.accept {
                return Some(true);
            }
            match tm_step(&c, self).ok()? {
                Some(next) => c = next,
                None => return Some(false),
            }
        }
        (c.state == self.accept).then_some(true)
    }
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let states: Vec<&str> = self.states.iter().map(String::as_str).collect();
        writeln!(f, "states: {}", states.join(" "))?;
        writeln!(f, "start: {}", self.start)?;
        writeln!(f, "accept: {}", self.accept)?;
        for ((q, r), (q2, w, mv)) in &self.delta {
            writeln!(
                f,
                "{q} {} -> {q2} {} {}",
                r.letter(),
                w.letter(),
                mv.letter()
            )?;
        }
        Ok(())
    }
}

/// Head on the last digit of `left`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TmConfig {
    pub left: Word,
    pub state: String,
    pub right: Word,
}

impl fmt::Display for TmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            word_string(&self.left),
            self.state,
            word_string(&self.right)
        )
    }
}

/// One machine step. `Ok(None)` when the head would leave the ribbon.
/// Right moves the head onto the first digit of `right`.
pub fn tm_step(c: &TmConfig, m: &TuringMachine) -> Result<Option<TmConfig>, Error> {
    if c.state == m.accept {
        return Err(Error::Precondition(format!(
            "configuration {c} is already accepting"
        )));
    }
    let Some(&read) = c.left.last() else {
        return Err(Error::Precondition(format!(
            "configuration {c} has no cell under the head"
        )));
    };
    let (q2, write, mv) = m.transition(&c.state, read).ok_or_else(|| {
        Error::Machine(format!(
            "no transition for ({}, {})",
            c.state,
            read.letter()
        ))
    })?;
    let mut left = c.left.clone();
    let mut right = c.right.clone();
    *left.last_mut().unwrap() = *write;
    match mv {
        Move::Stay => {}
        Move::Right => {
            if right.is_empty() {
                return Ok(None);
            }
            left.push(right.remove(0));
        }
        Move::Left => {
            if left.len() == 1 {
                return Ok(None);
            }
            right.insert(0, left.pop().unwrap());
        }
    }
    Ok(Some(TmConfig {
        left,
        state: q2.clone(),
        right,
    }))
}
