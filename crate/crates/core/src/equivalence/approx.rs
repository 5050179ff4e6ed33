//! The approximants `≃_i` on finite processes.

use std::collections::HashMap;

use crate::congruence::{Canon, Component, Single};
use crate::semantics::Engine;
use crate::syntax::{fresh_name, Atom, Mode, Name};

/// All ways to write a finite canonical process as `P1 | P2`, up to
/// congruence. Includes the trivial splits.
pub fn splits(p: &Canon) -> Vec<(Canon, Canon)> {
    let comps = p.components();
    let mut groups: Vec<(&Component, usize)> = Vec::new();
    for c in comps {
        match groups.last_mut() {
            Some((g, k)) if *g == c => *k += 1,
            _ => groups.push((c, 1)),
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for ((c, k), &take) in groups.iter().zip(&choice) {
            for i in 0..*k {
                if i < take {
                    left.push((*c).clone());
                } else {
                    right.push((*c).clone());
                }
            }
        }
        out.push((Canon::from_components(left), Canon::from_components(right)));
        // Odometer over 0..=k per group.
        let mut g = 0;
        loop {
            if g == groups.len() {
                return out;
            }
            if choice[g] < groups[g].1 {
                choice[g] += 1;
                break;
            }
            choice[g] = 0;
            g += 1;
        }
    }
}

/// Level past which the approximants no longer change for this pair.
pub fn stabilization_bound(p: &Canon, q: &Canon) -> usize {
    let sd = p.raw_seq_degree() + q.raw_seq_degree();
    let size = p.size() + q.size();
    (sd + 1) * (size + 2 * sd + 1) + 1
}

pub struct Approx<'e> {
    engine: &'e Engine,
    mode: Mode,
    memo: HashMap<(Canon, Canon, usize), bool>,
}

impl<'e> Approx<'e> {
    pub fn new(engine: &'e Engine, mode: Mode) -> Approx<'e> {
        Approx {
            engine,
            mode,
            memo: HashMap::new(),
        }
    }

    /// `p ≃_i q`, checking the clauses in both directions.
    pub fn approx(&mut self, p: &Canon, q: &Canon, i: usize) -> bool {
        if i == 0 || p == q {
            return true;
        }
        let i = i.min(stabilization_bound(p, q));
        let k = if p <= q {
            (p.clone(), q.clone(), i)
        } else {
            (q.clone(), p.clone(), i)
        };
        if let Some(&v) = self.memo.get(&k) {
            return v;
        }
        let v = self.dir(p, q, i - 1) && self.dir(q, p, i - 1);
        self.memo.insert(k, v);
        v
    }

    fn dir(&mut self, p: &Canon, q: &Canon, i: usize) -> bool {
        let qs = splits(q);
        for (p1, p2) in splits(p) {
            if !qs
                .iter()
                .any(|(q1, q2)| self.approx(&p1, q1, i) && self.approx(&p2, q2, i))
            {
                return false;
            }
        }
        let Some(a) = p.as_single() else { return true };
        let b = q.as_single();
        let engine = self.engine;
        match (a, b) {
            (Single::Prefix(c, pb), Some(Single::Prefix(d, qb))) if c == d => {
                let r = engine.stutter_closure(qb, *c);
                r.states.iter().any(|q2| self.approx(pb, q2, i))
            }
            (Single::Msg(n, None), Some(Single::Msg(m, None))) => n == m,
            (Single::Msg(n, Some(kp)), Some(Single::Msg(m, Some(kq)))) if n == m => {
                let r = engine.reduce_star(kq);
                r.states.iter().any(|q2| self.approx(kp, q2, i))
            }
            (Single::Abs(pb), Some(Single::Abs(qb))) => {
                let mut names = p.free_names();
                q.free_names_into(&mut names);
                let fresh = fresh_name(&names, "m");
                let probes: Vec<Name> = names.into_iter().chain([fresh]).collect();
                probes.into_iter().all(|n| {
                    let target = match self.mode {
                        Mode::Async => q.par(&Canon::single(Single::Msg(Atom::Name(n), None))),
                        Mode::Sync => qb.instantiate(n),
                    };
                    let r = engine.reduce_star(&target);
                    let pn = pb.instantiate(n);
                    r.states.iter().any(|q2| self.approx(&pn, q2, i))
                })
            }
            (Single::Amb(n, pb), Some(Single::Amb(m, qb))) if n == m => self.approx(pb, qb, i),
            _ => false,
        }
    }

    /// `p ≃_i q` at the stabilization level.
    pub fn stable(&mut self, p: &Canon, q: &Canon) -> bool {
        self.approx(p, q, stabilization_bound(p, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Fuel;
    use crate::syntax::parse_process;

    fn c(s: &str) -> Canon {
        Canon::from_process(&parse_process(s, Mode::Async).unwrap())
    }

    #[test]
    fn split_counts() {
        assert_eq!(splits(&c("0")).len(), 1);
        assert_eq!(splits(&c("a[0] | a[0] | b[0]")).len(), 6);
    }

    #[test]
    fn levels() {
        let e = Engine::new(Fuel::DEFAULT);
        let mut a = Approx::new(&e, Mode::Async);
        assert!(a.approx(&c("in n.0"), &c("out n.0"), 0));
        assert!(!a.approx(&c("in n.0"), &c("out n.0"), 1));
        assert!(!a.stable(&c("in n.in n.0"), &c("in n.0 | in n.0")));
        assert!(a.stable(&c("(x)((x)0 | <x>)"), &c("(x)0")));
        assert!(!a.stable(&c("(x)<x>"), &c("0")));
    }
}
