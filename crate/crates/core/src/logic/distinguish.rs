//! Distinguishing formulas for non-bisimilar finite processes, following
//! the case analysis of the completeness proof.

use super::formula::Formula;
use crate::congruence::{Canon, Single};
use crate::equivalence::{splits, Bisim};
use crate::error::Error;
use crate::semantics::{Engine, Fuel, Verdict};
use crate::syntax::{fresh_name, Atom, Mode, Name};

pub struct Distinguisher<'e> {
    engine: &'e Engine,
    bisim: Bisim<'e>,
    mode: Mode,
}

fn not_void() -> Formula {
    Formula::not(Formula::Void)
}

/// Holds exactly for processes with at least two components.
fn multi() -> Formula {
    Formula::par(not_void(), not_void())
}

fn msg(n: Name) -> Canon {
    Canon::single(Single::Msg(Atom::Name(n), None))
}

impl<'e> Distinguisher<'e> {
    pub fn new(engine: &'e Engine, mode: Mode) -> Distinguisher<'e> {
        Distinguisher {
            engine,
            bisim: Bisim::new(engine, mode, 0),
            mode,
        }
    }

    fn differ(&mut self, p: &Canon, q: &Canon) -> bool {
        self.bisim.check(p, q) == Verdict::False
    }

    /// A formula that `p` satisfies and `q` does not. Requires `p ≁ q`.
    pub fn formula(&mut self, p: &Canon, q: &Canon) -> Result<Formula, Error> {
        if p.is_nil() {
            return Ok(Formula::Void);
        }
        if q.is_nil() {
            return Ok(not_void());
        }
        match (p.as_single(), q.as_single()) {
            (Some(a), Some(b)) => self.single(a, b, p, q),
            (Some(_), None) => Ok(Formula::not(multi())),
            (None, Some(_)) => Ok(multi()),
            (None, None) => self.parallel(p, q),
        }
    }

    fn parallel(&mut self, p: &Canon, q: &Canon) -> Result<Formula, Error> {
        if let Some(f) = self.split_formula(p, q)? {
            return Ok(f);
        }
        if let Some(f) = self.split_formula(q, p)? {
            return Ok(Formula::not(f));
        }
        Err(Error::Precondition(format!(
            "no distinguishing decomposition for {p} and {q}"
        )))
    }

    /// Looks for a nontrivial split `p ≡ p1 | p2` that no split of `q`
    /// matches, and builds `B1 | B2` from it.
    fn split_formula(&mut self, p: &Canon, q: &Canon) -> Result<Option<Formula>, Error> {
        let qs = splits(q);
        let mut ps: Vec<(Canon, Canon)> = splits(p)
            .into_iter()
            .filter(|(a, b)| !a.is_nil() && !b.is_nil())
            .collect();
        ps.sort_by_key(|(a, _)| a.components().len());
        for (p1, p2) in ps {
            let mut bad1 = Vec::new();
            let mut bad2 = Vec::new();
            let mut ok = true;
            for (q1, q2) in &qs {
                if self.differ(&p1, q1) {
                    bad1.push(q1.clone());
                } else if self.differ(&p2, q2) {
                    bad2.push(q2.clone());
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut b1 = Vec::new();
            for q1 in dedup(bad1) {
                b1.push(self.formula(&p1, &q1)?);
            }
            let mut b2 = Vec::new();
            for q2 in dedup(bad2) {
                b2.push(self.formula(&p2, &q2)?);
            }
            return Ok(Some(Formula::par(
                Formula::and_all(b1),
                Formula::and_all(b2),
            )));
        }
        Ok(None)
    }

    fn shape(&self, s: &Single) -> Formula {
        match s {
            Single::Amb(n, _) => Formula::amb(*n, Formula::True),
            Single::Prefix(c, _) => Formula::cap_diamond(*c, Formula::True),
            Single::Msg(n, None) => Formula::MsgF(*n),
            Single::Msg(n, Some(_)) => Formula::out_diamond(*n, Formula::True),
            Single::Abs(_) => Formula::in_diamond(Atom::name("n"), Formula::True),
        }
    }

    /// `forall t. p_body ≁ t` over `targets` gives a conjunction of
    /// sub-distinguishers.
    fn against_all(&mut self, p: &Canon, targets: &[Canon]) -> Result<Option<Formula>, Error> {
        if targets.iter().any(|t| !self.differ(p, t)) {
            return Ok(None);
        }
        let mut conj = Vec::new();
        for t in targets {
            conj.push(self.formula(p, t)?);
        }
        Ok(Some(Formula::and_all(conj)))
    }

    fn single(&mut self, a: &Single, b: &Single, p: &Canon, q: &Canon) -> Result<Formula, Error> {
        let engine = self.engine;
        match (a, b) {
            (Single::Amb(n, pb), Single::Amb(m, qb)) if n == m => {
                Ok(Formula::amb(*n, self.formula(pb, qb)?))
            }
            (Single::Prefix(c, pb), Single::Prefix(d, qb)) if c == d => {
                let rq = engine.stutter_closure(qb, *c).states.clone();
                if let Some(f) = self.against_all(pb, &rq)? {
                    return Ok(Formula::cap_diamond(*c, f));
                }
                let rp = engine.stutter_closure(pb, *c).states.clone();
                let f = self.against_all(qb, &rp)?.ok_or_else(|| stuck(p, q))?;
                Ok(Formula::not(Formula::cap_diamond(*c, f)))
            }
            (Single::Msg(n, Some(kp)), Single::Msg(m, Some(kq))) if n == m => {
                let rq = engine.reduce_star(kq).states.clone();
                if let Some(f) = self.against_all(kp, &rq)? {
                    return Ok(Formula::out_diamond(*n, f));
                }
                let rp = engine.reduce_star(kp).states.clone();
                let f = self.against_all(kq, &rp)?.ok_or_else(|| stuck(p, q))?;
                Ok(Formula::not(Formula::out_diamond(*n, f)))
            }
            (Single::Abs(pb), Single::Abs(qb)) => {
                let mut avoid = p.free_names();
                q.free_names_into(&mut avoid);
                let m = fresh_name(&avoid, "m");
                let (pm, qm) = (pb.instantiate(m), qb.instantiate(m));
                let (from_p, from_q) = match self.mode {
                    Mode::Async => (p.par(&msg(m)), q.par(&msg(m))),
                    Mode::Sync => (pm.clone(), qm.clone()),
                };
                let rq = engine.reduce_star(&from_q).states.clone();
                if let Some(f) = self.against_all(&pm, &rq)? {
                    return Ok(Formula::in_diamond(Atom::Name(m), f));
                }
                let rp = engine.reduce_star(&from_p).states.clone();
                let f = self.against_all(&qm, &rp)?.ok_or_else(|| stuck(p, q))?;
                Ok(Formula::not(Formula::in_diamond(Atom::Name(m), f)))
            }
            _ => {
                let f = self.shape(a);
                Ok(f)
            }
        }
    }
}

fn stuck(p: &Canon, q: &Canon) -> Error {
    Error::Precondition(format!("{p} and {q} are not distinguishable"))
}

fn dedup(v: Vec<Canon>) -> Vec<Canon> {
    let mut out: Vec<Canon> = Vec::new();
    for c in v {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Distinguishing formula for finite closed canonical forms, or `None`
/// when they are bisimilar.
pub fn distinguish_canon(p: &Canon, q: &Canon, mode: Mode) -> Result<Option<Formula>, Error> {
    let engine = Engine::new(Fuel::DEFAULT);
    let mut d = Distinguisher::new(&engine, mode);
    if !d.differ(p, q) {
        return Ok(None);
    }
    d.formula(p, q).map(Some)
}
