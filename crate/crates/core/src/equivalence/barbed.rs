//! Barbed bisimilarity as a greatest fixpoint on the joint weak
//! reachability graph.

use std::collections::{BTreeSet, HashMap};

use crate::congruence::Canon;
use crate::semantics::{Engine, Verdict};
use crate::syntax::Name;

pub fn barbed(engine: &Engine, p: &Canon, q: &Canon) -> Verdict {
    let (rp, rq) = (engine.reduce_star(p), engine.reduce_star(q));
    if !rp.complete || !rq.complete {
        return Verdict::Unknown("fuel exhausted exploring reductions".into());
    }
    let mut states: Vec<Canon> = rp.states.clone();
    for s in &rq.states {
        if !states.contains(s) {
            states.push(s.clone());
        }
    }
    let index: HashMap<Canon, usize> = states
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let n = states.len();
    let mut weak: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut barbs: Vec<BTreeSet<Name>> = Vec::with_capacity(n);
    for s in &states {
        let r = engine.reduce_star(s);
        if !r.complete {
            return Verdict::Unknown("fuel exhausted exploring reductions".into());
        }
        weak.push(r.states.iter().map(|t| index[t]).collect());
        barbs.push(r.states.iter().flat_map(|t| t.top_ambients()).collect());
    }
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = barbs[i] == barbs[j];
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if !rel[i][j] {
                    continue;
                }
                let fwd = weak[i].iter().all(|&a| weak[j].iter().any(|&b| rel[a][b]));
                let bwd = weak[j].iter().all(|&b| weak[i].iter().any(|&a| rel[a][b]));
                if !(fwd && bwd) {
                    rel[i][j] = false;
                    rel[j][i] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Verdict::from_bool(rel[index[p]][index[q]])
}
