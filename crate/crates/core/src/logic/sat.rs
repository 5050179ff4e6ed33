//! The satisfaction relation `P ⊨ A`.

use std::collections::{BTreeSet, HashMap};

use super::formula::Formula;
use crate::congruence::{eta_nf, Canon, Component, Single};
use crate::error::Error;
use crate::semantics::{Engine, Exists, Fuel, Reach, Verdict};
use crate::syntax::{fresh_name, Atom, Capability, Mode, Name, Process};

/// How `A |> B` is decided: witnesses refute it, and it is validated only
/// when the models of `A` can be listed (at most `enumeration_bound` of
/// them).
#[derive(Clone, Debug)]
pub struct GuaranteePolicy {
    pub witnesses: Vec<Process>,
    pub enumeration_bound: usize,
}

impl Default for GuaranteePolicy {
    fn default() -> GuaranteePolicy {
        GuaranteePolicy {
            witnesses: Vec::new(),
            enumeration_bound: 64,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SatConfig {
    pub fuel: Fuel,
    pub policy: GuaranteePolicy,
    /// `None` infers the mode from the process.
    pub mode: Option<Mode>,
}

pub struct Sat<'e> {
    engine: &'e Engine,
    mode: Mode,
    witnesses: Vec<Canon>,
    bound: usize,
    memo: HashMap<(Canon, Formula), Verdict>,
}

fn all_of(vs: impl IntoIterator<Item = Result<Verdict, Error>>) -> Result<Verdict, Error> {
    let mut acc = Verdict::True;
    for v in vs {
        match v? {
            Verdict::False => return Ok(Verdict::False),
            Verdict::Unknown(r) => acc = Verdict::Unknown(r),
            Verdict::True => {}
        }
    }
    Ok(acc)
}

fn plain_single(p: &Canon) -> Option<&Single> {
    match p.components() {
        [c] if !c.replicated => Some(&c.single),
        _ => None,
    }
}

fn msg(n: Name) -> Canon {
    Canon::single(Single::Msg(Atom::Name(n), None))
}

fn name_of(a: &Atom, f: &Formula) -> Result<Name, Error> {
    a.as_name()
        .ok_or_else(|| Error::OpenTerm(format!("formula {f}")))
}

fn seq_degree(c: &Canon) -> usize {
    eta_nf(c, false).raw_seq_degree()
}

/// Splits `P ≡ P1 | P2`, letting each replicated component go left,
/// right or both, and hand out up to `copies` plain instances to the
/// other side.
pub fn par_splits(p: &Canon, copies: usize) -> Vec<(Canon, Canon)> {
    let mut groups: Vec<(&Component, usize)> = Vec::new();
    for c in p.components() {
        match groups.last_mut() {
            Some((g, k)) if *g == c => *k += 1,
            _ => groups.push((c, 1)),
        }
    }
    let mut out: Vec<(Vec<Component>, Vec<Component>)> = vec![(Vec::new(), Vec::new())];
    for (c, k) in groups {
        let mut next = Vec::new();
        for (l, r) in &out {
            if c.replicated {
                let plain = Component::plain(c.single.clone());
                let mut opts: Vec<(Vec<Component>, Vec<Component>)> = Vec::new();
                opts.push((vec![c.clone()], vec![c.clone()]));
                for j in 0..=copies {
                    opts.push((vec![c.clone()], vec![plain.clone(); j]));
                    opts.push((vec![plain.clone(); j], vec![c.clone()]));
                }
                for (a, b) in opts {
                    let (mut l2, mut r2) = (l.clone(), r.clone());
                    l2.extend(a);
                    r2.extend(b);
                    next.push((l2, r2));
                }
            } else {
                for take in 0..=k {
                    let (mut l2, mut r2) = (l.clone(), r.clone());
                    l2.extend(std::iter::repeat_n(c.clone(), take));
                    r2.extend(std::iter::repeat_n(c.clone(), k - take));
                    next.push((l2, r2));
                }
            }
        }
        out = next;
    }
    let mut seen = BTreeSet::new();
    out.into_iter()
        .map(|(l, r)| (Canon::from_components(l), Canon::from_components(r)))
        .filter(|pair| seen.insert(pair.clone()))
        .collect()
}

impl<'e> Sat<'e> {
    pub fn new(engine: &'e Engine, mode: Mode, policy: &GuaranteePolicy) -> Sat<'e> {
        Sat {
            engine,
            mode,
            witnesses: policy.witnesses.iter().map(Canon::from_process).collect(),
            bound: policy.enumeration_bound,
            memo: HashMap::new(),
        }
    }

    fn exists_in(&mut self, reach: &Reach, a: &Formula) -> Result<Verdict, Error> {
        let mut acc = Exists::new(reach.complete, "reductions");
        for s in &reach.states {
            if acc.push(self.check(s, a)?) {
                return Ok(Verdict::True);
            }
        }
        Ok(acc.finish(false))
    }

    fn forall_in(&mut self, reach: &Reach, a: &Formula) -> Result<Verdict, Error> {
        let mut acc = Verdict::True;
        for s in &reach.states {
            match self.check(s, a)? {
                Verdict::False => return Ok(Verdict::False),
                Verdict::Unknown(r) => acc = Verdict::Unknown(r),
                Verdict::True => {}
            }
        }
        if acc.is_true() && !reach.complete {
            return Ok(Verdict::Unknown(
                "fuel exhausted exploring reductions".into(),
            ));
        }
        Ok(acc)
    }

    /// Successors used by the input modalities.
    fn input_reach(&self, p: &Canon, body: &Canon, n: Name) -> Reach {
        let start = match self.mode {
            Mode::Async => p.par(&msg(n)),
            Mode::Sync => body.instantiate(n),
        };
        (*self.engine.reduce_star(&start)).clone()
    }

    pub fn check(&mut self, p: &Canon, f: &Formula) -> Result<Verdict, Error> {
        let key = (p.clone(), f.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.eval(p, f)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn eval(&mut self, p: &Canon, f: &Formula) -> Result<Verdict, Error> {
        use Formula::*;
        let engine = self.engine;
        Ok(match f {
            True => Verdict::True,
            Void => Verdict::from_bool(p.is_nil()),
            Not(a) => self.check(p, a)?.negate(),
            Or(a, b) => match self.check(p, a)? {
                Verdict::True => Verdict::True,
                va => {
                    let vb = self.check(p, b)?;
                    va.or(|| vb)
                }
            },
            ForallName(x, a) => {
                let mut names = p.free_names();
                names.extend(f.free_names());
                let fresh = fresh_name(&names, "fresh");
                names.insert(fresh);
                let items: Vec<Formula> = names.into_iter().map(|n| a.substitute(*x, n)).collect();
                let mut acc = Verdict::True;
                for g in items {
                    match self.check(p, &g)? {
                        Verdict::False => return Ok(Verdict::False),
                        Verdict::Unknown(r) => acc = Verdict::Unknown(r),
                        Verdict::True => {}
                    }
                }
                acc
            }
            Sometime(a) => {
                let r = engine.reduce_star(p);
                self.exists_in(&r, a)?
            }
            AmbF(n, a) => {
                let n = name_of(n, f)?;
                match plain_single(p) {
                    Some(Single::Amb(Atom::Name(m), b)) if *m == n => self.check(&b.clone(), a)?,
                    _ => Verdict::False,
                }
            }
            ParF(a, b) => {
                let copies = a.size().max(b.size());
                let mut acc = Exists::new(true, "");
                for (l, r) in par_splits(p, copies) {
                    let vl = self.check(&l, a)?;
                    if vl.is_false() {
                        continue;
                    }
                    let vr = self.check(&r, b)?;
                    if acc.push(vl.and(|| vr)) {
                        return Ok(Verdict::True);
                    }
                }
                acc.finish(false)
            }
            At(a, n) => {
                let n = name_of(n, f)?;
                let wrapped = Canon::single(Single::Amb(Atom::Name(n), p.clone()));
                self.check(&wrapped, a)?
            }
            Guarantee(a, b) => self.guarantee(p, a, b)?,
            CapDiamond(c, a) | CapBox(c, a) => {
                let target = name_of(&c.target, f)?;
                let cap = Capability::new(c.kind, Atom::Name(target));
                match plain_single(p) {
                    Some(Single::Prefix(d, body)) if *d == cap => {
                        let r = engine.stutter_closure(body, cap);
                        if matches!(f, CapDiamond(..)) {
                            self.exists_in(&r, a)?
                        } else {
                            self.forall_in(&r, a)?
                        }
                    }
                    _ => Verdict::False,
                }
            }
            MsgF(n) => {
                let n = name_of(n, f)?;
                Verdict::from_bool(
                    matches!(plain_single(p), Some(Single::Msg(Atom::Name(m), _)) if *m == n),
                )
            }
            OutDiamond(n, a) => {
                let n = name_of(n, f)?;
                match plain_single(p) {
                    Some(Single::Msg(Atom::Name(m), k)) if *m == n => {
                        let cont = k.clone().unwrap_or_else(Canon::nil);
                        let r = engine.reduce_star(&cont);
                        self.exists_in(&r, a)?
                    }
                    _ => Verdict::False,
                }
            }
            InDiamond(n, a) | InBox(n, a) => {
                let n = name_of(n, f)?;
                match plain_single(p) {
                    Some(Single::Abs(body)) => {
                        let r = self.input_reach(p, &body.clone(), n);
                        if matches!(f, InDiamond(..)) {
                            self.exists_in(&r, a)?
                        } else {
                            self.forall_in(&r, a)?
                        }
                    }
                    _ => Verdict::False,
                }
            }
            ReplMsg(n) => {
                let n = name_of(n, f)?;
                let target = Canon::from_components(vec![Component {
                    single: Single::Msg(Atom::Name(n), None),
                    replicated: true,
                }]);
                Verdict::from_bool(*p == target)
            }
            ReplCap(c, a) => {
                let target = name_of(&c.target, f)?;
                let cap = Capability::new(c.kind, Atom::Name(target));
                self.replicated(
                    p,
                    f,
                    "sequentially",
                    |s| match s {
                        Single::Prefix(d, _) if *d == cap => Ok(()),
                        _ => Err(format!("{cap}.R")),
                    },
                    |this, comp| this.check(comp, a).map(|v| (v, comp.clone())),
                    seq_degree,
                )?
            }
            ReplInput(a) => self.replicated(
                p,
                f,
                "sequentially",
                |s| match s {
                    Single::Abs(_) => Ok(()),
                    _ => Err("(x)R".to_string()),
                },
                |this, comp| this.check(comp, a).map(|v| (v, comp.clone())),
                seq_degree,
            )?,
            ReplAmb(n, a) => {
                let n = name_of(n, f)?;
                self.replicated(
                    p,
                    f,
                    "depth",
                    |_| Ok(()),
                    |this, comp| match plain_single(comp) {
                        Some(Single::Amb(Atom::Name(m), b)) if *m == n => {
                            let b = b.clone();
                            this.check(&b, a).map(|v| (v, b))
                        }
                        _ => Ok((Verdict::False, comp.clone())),
                    },
                    |c| c.depth_degree(),
                )?
            }
            FreeName(n) => {
                let n = name_of(n, f)?;
                Verdict::from_bool(p.free_names().contains(&n))
            }
        })
    }

    /// `P ≡ !P1 | (!)P2 | ... | (!)Pr` with every `Pi` accepted by `test`.
    /// Models must share one degree and have the expected shape.
    fn replicated(
        &mut self,
        p: &Canon,
        f: &Formula,
        kind: &'static str,
        shape: impl Fn(&Single) -> Result<(), String>,
        test: impl Fn(&mut Self, &Canon) -> Result<(Verdict, Canon), Error>,
        degree: impl Fn(&Canon) -> usize,
    ) -> Result<Verdict, Error> {
        if !p.components().iter().any(|c| c.replicated) {
            return Ok(Verdict::False);
        }
        let mut first: Option<(usize, Canon)> = None;
        let mut acc = Verdict::True;
        for c in p.components() {
            let comp = Canon::single(c.single.clone());
            let (v, model) = test(self, &comp)?;
            if v.is_true() {
                if let Err(expected) = shape(&c.single) {
                    return Err(Error::Precondition(format!(
                        "models of `{f}` must have the form {expected}, found {comp}"
                    )));
                }
                let d = degree(&model);
                match &first {
                    None => first = Some((d, model)),
                    Some((d0, m0)) if *d0 != d => {
                        return Err(Error::Selectivity {
                            formula: f.to_string(),
                            kind,
                            first: m0.to_string(),
                            second: model.to_string(),
                        });
                    }
                    _ => {}
                }
            }
            match v {
                Verdict::False => acc = Verdict::False,
                Verdict::Unknown(r) if !acc.is_false() => acc = Verdict::Unknown(r),
                _ => {}
            }
        }
        Ok(acc)
    }

    /// Every model of `a`, when there are finitely many and they can be
    /// listed.
    fn models(&self, a: &Formula) -> Option<Vec<Canon>> {
        use Formula::*;
        let out = match a {
            Void => vec![Canon::nil()],
            MsgF(Atom::Name(n)) if self.mode == Mode::Async => vec![msg(*n)],
            AmbF(Atom::Name(n), b) => self
                .models(b)?
                .into_iter()
                .map(|m| Canon::single(Single::Amb(Atom::Name(*n), m)))
                .collect(),
            ParF(x, y) => {
                let (xs, ys) = (self.models(x)?, self.models(y)?);
                if xs.len().saturating_mul(ys.len()) > self.bound {
                    return None;
                }
                let mut v = Vec::new();
                for m in &xs {
                    for n in &ys {
                        let c = m.par(n);
                        if !v.contains(&c) {
                            v.push(c);
                        }
                    }
                }
                v
            }
            Or(x, y) => {
                let mut v = self.models(x)?;
                for m in self.models(y)? {
                    if !v.contains(&m) {
                        v.push(m);
                    }
                }
                v
            }
            _ => return None,
        };
        (out.len() <= self.bound).then_some(out)
    }

    fn guarantee(&mut self, p: &Canon, a: &Formula, b: &Formula) -> Result<Verdict, Error> {
        let mut unknown = None;
        for r in self.witnesses.clone() {
            match self.check(&r, a)? {
                Verdict::True => match self.check(&p.par(&r), b)? {
                    Verdict::False => return Ok(Verdict::False),
                    Verdict::Unknown(why) => unknown = Some(why),
                    Verdict::True => {}
                },
                Verdict::Unknown(why) => unknown = Some(why),
                Verdict::False => {}
            }
        }
        let Some(models) = self.models(a) else {
            return Ok(Verdict::Unknown(unknown.unwrap_or_else(|| {
                "guarantee: models of the left formula cannot be enumerated".into()
            })));
        };
        let checks: Vec<Result<Verdict, Error>> =
            models.iter().map(|m| self.check(&p.par(m), b)).collect();
        all_of(checks)
    }
}

/// Sync when the process contains a message with a continuation.
pub(crate) fn mode_for(p: &Canon, explicit: Option<Mode>) -> Mode {
    explicit.unwrap_or_else(|| crate::equivalence::infer_mode(p))
}

pub fn satisfies(
    p: &Process,
    f: &Formula,
    fuel: Fuel,
    policy: &GuaranteePolicy,
) -> Result<Verdict, Error> {
    satisfies_with(
        p,
        f,
        &SatConfig {
            fuel,
            policy: policy.clone(),
            mode: None,
        },
    )
}

pub fn satisfies_with(p: &Process, f: &Formula, cfg: &SatConfig) -> Result<Verdict, Error> {
    p.require_closed("satisfies")?;
    if let Some(m) = cfg.mode {
        p.check_mode(m)?;
    }
    if !f.is_closed() {
        return Err(Error::OpenTerm(format!("formula {f}")));
    }
    for w in &cfg.policy.witnesses {
        w.require_closed("guarantee witness")?;
    }
    let c = Canon::from_process(p);
    let engine = Engine::new(cfg.fuel);
    let mut sat = Sat::new(&engine, mode_for(&c, cfg.mode), &cfg.policy);
    sat.check(&c, f)
}
