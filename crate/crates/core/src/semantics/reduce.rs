//! One-step reduction on canonical forms.

use std::collections::HashSet;
use std::fmt;

use crate::congruence::{prefix_of, Canon, Component, Single};
use crate::syntax::{Atom, CapKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Open,
    In,
    Out,
    Com,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Open => "Red-Open",
            Rule::In => "Red-In",
            Rule::Out => "Red-Out",
            Rule::Com => "Red-Com",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn amb(n: Atom, body: Vec<Component>) -> Component {
    Component::plain(Single::Amb(n, Canon::from_components(body)))
}

/// Every one-step reduct of `p`, tagged with the axiom that fired.
/// `inner` computes the reducts of ambient bodies, which lets callers
/// memoize the recursion.
pub(crate) fn reductions_with(
    p: &Canon,
    inner: &dyn Fn(&Canon) -> Vec<(Rule, Canon)>,
) -> Vec<(Rule, Canon)> {
    let cs = p.components();
    let mut out: Vec<(Rule, Canon)> = Vec::new();
    for (i, ci) in cs.iter().enumerate() {
        match &ci.single {
            Single::Prefix(..) => {
                let Some((CapKind::Open, n, body)) = prefix_of(&ci.single) else {
                    continue;
                };
                for (j, cj) in cs.iter().enumerate() {
                    if let Single::Amb(Atom::Name(m), q) = &cj.single {
                        if *m == n {
                            let mut rest = p.without(&[i, j]);
                            rest.extend_from_slice(body.components());
                            rest.extend_from_slice(q.components());
                            out.push((Rule::Open, Canon::from_components(rest)));
                        }
                    }
                }
            }
            Single::Amb(Atom::Name(n), r) => {
                let n = *n;
                let rc = r.components();
                for (k, ck) in rc.iter().enumerate() {
                    // n[in m.P1 | P2] | m[Q] -> m[n[P1 | P2] | Q]
                    if let Some((CapKind::In, m, p1)) = prefix_of(&ck.single) {
                        for (j, cj) in cs.iter().enumerate() {
                            if j == i && !ci.replicated {
                                continue;
                            }
                            let Single::Amb(Atom::Name(m2), q) = &cj.single else {
                                continue;
                            };
                            if *m2 != m {
                                continue;
                            }
                            let mut moved = r.without(&[k]);
                            moved.extend_from_slice(p1.components());
                            let mut target = q.components().to_vec();
                            target.push(amb(Atom::Name(n), moved));
                            let mut rest = p.without(&[i, j]);
                            rest.push(amb(Atom::Name(m), target));
                            out.push((Rule::In, Canon::from_components(rest)));
                        }
                    }
                    // n[k[out n.P1 | P2] | Q] -> k[P1 | P2] | n[Q]
                    if let Single::Amb(Atom::Name(child), r2) = &ck.single {
                        for (l, cl) in r2.components().iter().enumerate() {
                            if let Some((CapKind::Out, m, p1)) = prefix_of(&cl.single) {
                                if m != n {
                                    continue;
                                }
                                let mut moved = r2.without(&[l]);
                                moved.extend_from_slice(p1.components());
                                let mut rest = p.without(&[i]);
                                rest.push(amb(Atom::Name(*child), moved));
                                rest.push(amb(Atom::Name(n), r.without(&[k])));
                                out.push((Rule::Out, Canon::from_components(rest)));
                            }
                        }
                    }
                }
                for (rule, r2) in inner(r) {
                    let mut rest = p.without(&[i]);
                    rest.push(Component::plain(Single::Amb(Atom::Name(n), r2)));
                    out.push((rule, Canon::from_components(rest)));
                }
            }
            Single::Msg(Atom::Name(n), cont) => {
                for (j, cj) in cs.iter().enumerate() {
                    if let Single::Abs(body) = &cj.single {
                        let mut rest = p.without(&[i, j]);
                        if let Some(k) = cont {
                            rest.extend_from_slice(k.components());
                        }
                        rest.extend_from_slice(body.instantiate(*n).components());
                        out.push((Rule::Com, Canon::from_components(rest)));
                    }
                }
            }
            _ => {}
        }
    }
    dedup(out)
}

fn dedup(v: Vec<(Rule, Canon)>) -> Vec<(Rule, Canon)> {
    let mut seen = HashSet::new();
    v.into_iter()
        .filter(|(_, c)| seen.insert(c.clone()))
        .collect()
}

pub fn reductions(p: &Canon) -> Vec<(Rule, Canon)> {
    reductions_with(p, &|r| reductions(r))
}
