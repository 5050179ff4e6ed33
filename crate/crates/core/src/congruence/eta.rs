//! The eta law `(x)((x)P | <x>) = (x)P` as a rewrite system on canonical
//! forms.

use super::canon::{Canon, Component, Single};
use crate::syntax::Atom;

/// If `body` is the body of an eta redex `(x)((x)P | <x>)`, returns the
/// contractum `(x)P` as a single in the enclosing scope.
fn redex(body: &Canon) -> Option<Single> {
    let [a, b] = body.components() else {
        return None;
    };
    if a.replicated || b.replicated {
        return None;
    }
    let (abs, msg) = match (&a.single, &b.single) {
        (Single::Abs(_), Single::Msg(..)) => (&a.single, &b.single),
        (Single::Msg(..), Single::Abs(_)) => (&b.single, &a.single),
        _ => return None,
    };
    if *msg != Single::Msg(Atom::Bound(0), None) {
        return None;
    }
    let Single::Abs(inner) = abs else {
        unreachable!()
    };
    // The outer variable must not occur in (x)P; inside the inner body it
    // would be index 1.
    if inner.uses_index(1) {
        return None;
    }
    Some(Single::Abs(inner.shift(2, -1)))
}

/// All one-step eta reducts, deduplicated. With `head_only`, redexes under
/// capabilities, inputs and synchronous outputs are not rewritten.
pub fn eta_step(p: &Canon, head_only: bool) -> Vec<Canon> {
    let mut out: Vec<Canon> = Vec::new();
    for (i, comp) in p.components().iter().enumerate() {
        for s in single_steps(&comp.single, head_only) {
            let mut comps = p.components().to_vec();
            comps[i] = Component {
                single: s,
                replicated: comp.replicated,
            };
            let q = Canon::from_components(comps);
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

fn single_steps(s: &Single, head_only: bool) -> Vec<Single> {
    match s {
        Single::Prefix(c, b) if !head_only => eta_step(b, false)
            .into_iter()
            .map(|b| Single::Prefix(*c, b))
            .collect(),
        Single::Msg(a, Some(k)) if !head_only => eta_step(k, false)
            .into_iter()
            .map(|k| Single::Msg(*a, Some(k)))
            .collect(),
        Single::Amb(a, b) => eta_step(b, head_only)
            .into_iter()
            .map(|b| Single::Amb(*a, b))
            .collect(),
        Single::Abs(b) => {
            let mut v: Vec<Single> = redex(b).into_iter().collect();
            if !head_only {
                v.extend(eta_step(b, false).into_iter().map(Single::Abs));
            }
            v
        }
        _ => Vec::new(),
    }
}

/// Eta normal form by innermost rewriting.
pub fn eta_normal_form(p: &Canon, head_only: bool) -> Canon {
    Canon::from_components(
        p.components()
            .iter()
            .map(|c| Component {
                single: single_nf(&c.single, head_only),
                replicated: c.replicated,
            })
            .collect(),
    )
}

fn single_nf(s: &Single, head_only: bool) -> Single {
    match s {
        Single::Prefix(c, b) if !head_only => Single::Prefix(*c, eta_normal_form(b, false)),
        Single::Msg(a, Some(k)) if !head_only => Single::Msg(*a, Some(eta_normal_form(k, false))),
        Single::Amb(a, b) => Single::Amb(*a, eta_normal_form(b, head_only)),
        Single::Abs(b) => {
            let mut cur = if head_only {
                b.clone()
            } else {
                eta_normal_form(b, false)
            };
            // In full mode the contractum is already normal; at the head the
            // contractum may itself be a redex.
            while let Some(Single::Abs(inner)) = redex(&cur) {
                cur = inner;
            }
            Single::Abs(cur)
        }
        other => other.clone(),
    }
}

pub fn eta_congruent(p: &Canon, q: &Canon) -> bool {
    p == q || eta_normal_form(p, false) == eta_normal_form(q, false)
}

/// Number of abstraction nodes, the termination measure of eta rewriting.
pub fn abs_count(p: &Canon) -> usize {
    p.components()
        .iter()
        .map(|c| {
            let own = usize::from(matches!(c.single, Single::Abs(_)));
            own + c.single.body().map_or(0, abs_count)
        })
        .sum()
}
