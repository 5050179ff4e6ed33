//! Intensional bisimilarity through the inductive characterization.
//!
//! Single components are compared clause by clause. Parallel compositions
//! are compared by a bipartite matching between components, with
//! replicated components able to absorb any number of similar copies on
//! the other side. On non-finite terms the search is fueled; revisiting a
//! pair that is still being decided assumes it holds, and the search is
//! rerun whenever such an assumption turns out wrong.

use std::collections::{HashMap, HashSet};

use crate::congruence::{Canon, Single};
use crate::semantics::{Engine, Exists, Fuel, Verdict};
use crate::syntax::{fresh_name_from, Atom, Mode, Name};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BisimConfig {
    pub fuel: Fuel,
    pub mode: Mode,
    /// Starting index for the fresh names probed by input clauses.
    pub fresh_seed: u64,
}

impl Default for BisimConfig {
    fn default() -> BisimConfig {
        BisimConfig {
            fuel: Fuel::DEFAULT,
            mode: Mode::Async,
            fresh_seed: 0,
        }
    }
}

impl BisimConfig {
    pub fn with_mode(mode: Mode) -> BisimConfig {
        BisimConfig {
            mode,
            ..BisimConfig::default()
        }
    }
}

type Key = (Canon, Canon);

fn key(p: &Canon, q: &Canon) -> Key {
    if p <= q {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    }
}

/// Verdicts keyed on unordered canonical pairs.
#[derive(Default, Debug, Clone)]
pub struct BisimCache {
    map: HashMap<Key, Verdict>,
}

impl BisimCache {
    pub fn get(&self, p: &Canon, q: &Canon) -> Option<&Verdict> {
        self.map.get(&key(p, q))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

const EXPLAIN_DEPTH: usize = 3;

pub struct Bisim<'e> {
    engine: &'e Engine,
    mode: Mode,
    fresh_seed: u64,
    known: HashMap<Key, Verdict>,
    cache: BisimCache,
    in_progress: HashSet<Key>,
    assumed: HashSet<Key>,
    depth: usize,
    explain: Option<Vec<String>>,
}

impl<'e> Bisim<'e> {
    pub fn new(engine: &'e Engine, mode: Mode, fresh_seed: u64) -> Bisim<'e> {
        Bisim {
            engine,
            mode,
            fresh_seed,
            known: HashMap::new(),
            cache: BisimCache::default(),
            in_progress: HashSet::new(),
            assumed: HashSet::new(),
            depth: 0,
            explain: None,
        }
    }

    /// Records the clauses that decided the top pair, down to a few levels.
    pub fn explaining(mut self) -> Self {
        self.explain = Some(Vec::new());
        self
    }

    pub fn explanation(&self) -> &[String] {
        self.explain.as_deref().unwrap_or(&[])
    }

    pub fn cache(&self) -> &BisimCache {
        &self.cache
    }

    /// Decides `p ~ q`, rerunning until every cycle assumption is confirmed.
    pub fn check(&mut self, p: &Canon, q: &Canon) -> Verdict {
        // Entries left by earlier completed checks are sound; only a rerun
        // has to forget what was derived under a broken assumption.
        loop {
            self.in_progress.clear();
            self.assumed.clear();
            if let Some(e) = self.explain.as_mut() {
                e.clear();
            }
            let v = self.sim(p, q);
            let mut broken = false;
            for k in std::mem::take(&mut self.assumed) {
                match self.cache.map.get(&k) {
                    Some(Verdict::True) | None => {}
                    Some(other) => {
                        self.known.insert(k, other.clone());
                        broken = true;
                    }
                }
            }
            if !broken {
                return v;
            }
            self.cache.map.clear();
        }
    }

    fn note(&mut self, clause: &str, p: &Canon, q: &Canon, v: &Verdict) {
        if self.depth <= EXPLAIN_DEPTH {
            if let Some(e) = self.explain.as_mut() {
                let indent = "  ".repeat(self.depth.saturating_sub(1));
                e.push(format!("{indent}{clause}: {p}  ~  {q}  => {v}"));
            }
        }
    }

    pub(crate) fn sim(&mut self, p: &Canon, q: &Canon) -> Verdict {
        if p == q {
            return Verdict::True;
        }
        let k = key(p, q);
        if let Some(v) = self.known.get(&k) {
            return v.clone();
        }
        if let Some(v) = self.cache.map.get(&k) {
            return v.clone();
        }
        if self.in_progress.contains(&k) {
            self.assumed.insert(k);
            return Verdict::True;
        }
        if self.depth >= self.engine.fuel().max_depth {
            return Verdict::Unknown("bisimulation search depth exhausted".into());
        }
        self.in_progress.insert(k.clone());
        self.depth += 1;
        // Explanation lines are pushed after the children; keep the parent first.
        let mark = self.explain.as_ref().map_or(0, |e| e.len());
        let (clause, v) = self.dispatch(p, q);
        self.note(clause, p, q, &v);
        if let Some(e) = self.explain.as_mut() {
            if e.len() > mark {
                let line = e.pop().unwrap();
                e.insert(mark, line);
            }
        }
        self.depth -= 1;
        self.in_progress.remove(&k);
        self.cache.map.insert(k, v.clone());
        v
    }

    fn dispatch(&mut self, p: &Canon, q: &Canon) -> (&'static str, Verdict) {
        let single = |c: &Canon| {
            c.as_single()
                .filter(|_| !c.components()[0].replicated)
                .cloned()
        };
        match (single(p), single(q)) {
            _ if p.is_nil() || q.is_nil() => ("nil", Verdict::False),
            (Some(a), Some(b)) => self.single(&a, &b, p, q),
            _ => ("par", self.multi(p, q)),
        }
    }

    fn exists_in(
        &mut self,
        reach: &crate::semantics::Reach,
        what: &str,
        target: &Canon,
    ) -> Verdict {
        let mut acc = Exists::new(reach.complete, what);
        let mut found = false;
        for s in &reach.states {
            if acc.push(self.sim(s, target)) {
                found = true;
                break;
            }
        }
        acc.finish(found)
    }

    fn fresh(&self, p: &Canon, q: &Canon) -> Name {
        let mut avoid = p.free_names();
        q.free_names_into(&mut avoid);
        fresh_name_from(&avoid, "m", self.fresh_seed)
    }

    fn single(&mut self, a: &Single, b: &Single, p: &Canon, q: &Canon) -> (&'static str, Verdict) {
        let engine = self.engine;
        match (a, b) {
            (Single::Amb(n, pb), Single::Amb(m, qb)) => {
                let v = if n != m {
                    Verdict::False
                } else {
                    self.sim(pb, qb)
                };
                ("ambient", v)
            }
            (Single::Prefix(c, pb), Single::Prefix(d, qb)) => {
                if c != d {
                    return ("prefix", Verdict::False);
                }
                let rp = engine.stutter_closure(pb, *c);
                let v = self.exists_in(&rp, "stuttering closure", qb);
                let v = v.and(|| {
                    let rq = engine.stutter_closure(qb, *c);
                    self.exists_in(&rq, "stuttering closure", pb)
                });
                ("prefix", v)
            }
            (Single::Msg(n, None), Single::Msg(m, None)) => ("message", Verdict::from_bool(n == m)),
            (Single::Msg(n, Some(kp)), Single::Msg(m, Some(kq))) => {
                if n != m {
                    return ("sync message", Verdict::False);
                }
                let rq = engine.reduce_star(kq);
                let v = self.exists_in(&rq, "continuation", kp);
                let v = v.and(|| {
                    let rp = engine.reduce_star(kp);
                    self.exists_in(&rp, "continuation", kq)
                });
                ("sync message", v)
            }
            (Single::Abs(pb), Single::Abs(qb)) => {
                let m = self.fresh(p, q);
                let (pm, qm) = (pb.instantiate(m), qb.instantiate(m));
                match self.mode {
                    Mode::Async => {
                        let out = Canon::single(Single::Msg(Atom::Name(m), None));
                        let rq = engine.reduce_star(&q.par(&out));
                        let v = self.exists_in(&rq, "input", &pm);
                        let v = v.and(|| {
                            let rp = engine.reduce_star(&p.par(&out));
                            self.exists_in(&rp, "input", &qm)
                        });
                        ("abstraction", v)
                    }
                    Mode::Sync => {
                        let rq = engine.reduce_star(&qm);
                        let v = self.exists_in(&rq, "input", &pm);
                        let v = v.and(|| {
                            let rp = engine.reduce_star(&pm);
                            self.exists_in(&rp, "input", &qm)
                        });
                        ("sync abstraction", v)
                    }
                }
            }
            _ => ("head", Verdict::False),
        }
    }

    fn multi(&mut self, p: &Canon, q: &Canon) -> Verdict {
        let split = |c: &Canon| {
            let mut plain = Vec::new();
            let mut repl = Vec::new();
            for comp in c.components() {
                let s = Canon::single(comp.single.clone());
                if comp.replicated {
                    repl.push(s);
                } else {
                    plain.push(s);
                }
            }
            (plain, repl)
        };
        let (pp, pr) = split(p);
        let (qp, qr) = split(q);
        if pr.is_empty() != qr.is_empty() {
            return Verdict::False;
        }
        if pr.is_empty() && pp.len() != qp.len() {
            return Verdict::False;
        }

        // Replicated components must pair up in both directions.
        let rr: Vec<Vec<Verdict>> = pr
            .iter()
            .map(|s| qr.iter().map(|t| self.sim(s, t)).collect())
            .collect();
        let mut cond_a = Verdict::True;
        for row in &rr {
            cond_a = cond_a.and(|| any(row.iter().cloned()));
        }
        for j in 0..qr.len() {
            cond_a = cond_a.and(|| any(rr.iter().map(|row| row[j].clone())));
        }
        if cond_a.is_false() {
            return Verdict::False;
        }

        // Plain components: matched one to one, or absorbed by a
        // replicated component on the other side.
        let coverable: Vec<Verdict> = pp
            .iter()
            .map(|x| any(qr.iter().map(|t| self.sim(x, t)).collect::<Vec<_>>()))
            .collect();
        let absorbable: Vec<Verdict> = qp
            .iter()
            .map(|y| any(pr.iter().map(|s| self.sim(s, y)).collect::<Vec<_>>()))
            .collect();
        // Cheap count test before the quadratic edge matrix.
        let must_p = coverable.iter().filter(|v| v.is_false()).count();
        let must_q = absorbable.iter().filter(|v| v.is_false()).count();
        if must_p > qp.len() || must_q > pp.len() {
            return Verdict::False;
        }
        let mut edges: Vec<Vec<Option<Verdict>>> = vec![vec![None; qp.len()]; pp.len()];
        let mut edge = |this: &mut Self, i: usize, j: usize| -> Verdict {
            if edges[i][j].is_none() {
                edges[i][j] = Some(this.sim(&pp[i], &qp[j]));
            }
            edges[i][j].clone().unwrap()
        };

        let cond_b = |this: &mut Self,
                      edge: &mut dyn FnMut(&mut Self, usize, usize) -> Verdict,
                      optimistic: bool| {
            let ok = |v: &Verdict| {
                if optimistic {
                    !v.is_false()
                } else {
                    v.is_true()
                }
            };
            let xs: Vec<usize> = (0..pp.len()).filter(|&i| !ok(&coverable[i])).collect();
            let ys: Vec<usize> = (0..qp.len()).filter(|&j| !ok(&absorbable[j])).collect();
            let mut adj = |i: usize, j: usize| ok(&edge(this, i, j));
            covers(qp.len(), &xs, &mut adj) && covers(pp.len(), &ys, &mut |j, i| adj(i, j))
        };
        let strict = cond_b(self, &mut edge, false);
        let cond_b = if strict {
            Verdict::True
        } else if !cond_b(self, &mut edge, true) {
            Verdict::False
        } else {
            Verdict::Unknown("undecided component matching".into())
        };
        cond_a.and(|| cond_b)
    }
}

fn any(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut acc = Exists::new(true, "");
    let mut found = false;
    for v in vs {
        if acc.push(v) {
            found = true;
            break;
        }
    }
    acc.finish(found)
}

/// Is there a matching in the bipartite graph `left x right` that covers
/// every vertex of `must`? Kuhn's augmenting paths.
fn covers(right: usize, must: &[usize], adj: &mut dyn FnMut(usize, usize) -> bool) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for &x in must {
        let mut seen = vec![false; right];
        if !augment(x, right, adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(
    x: usize,
    right: usize,
    adj: &mut dyn FnMut(usize, usize) -> bool,
    owner: &mut Vec<Option<usize>>,
    seen: &mut Vec<bool>,
) -> bool {
    for y in 0..right {
        if seen[y] || !adj(x, y) {
            continue;
        }
        seen[y] = true;
        match owner[y] {
            None => {
                owner[y] = Some(x);
                return true;
            }
            Some(other) => {
                if augment(other, right, adj, owner, seen) {
                    owner[y] = Some(x);
                    return true;
                }
            }
        }
    }
    false
}
