//! Formulas forcing a lower bound on the sequentiality or depth degree.

use super::formula::Formula;
use crate::congruence::{eta_nf, Canon, Single};
use crate::syntax::{Atom, Capability, Name, Variable};

fn atom(a: Atom, env: &[Variable]) -> Atom {
    match a {
        Atom::Bound(i) => Atom::Free(env[env.len() - 1 - i as usize]),
        other => other,
    }
}

fn var_name(depth: usize, avoid: &std::collections::BTreeSet<Name>) -> Variable {
    let mut i = depth;
    loop {
        let s = format!("x{i}");
        if !avoid.contains(&Name::new(&s)) {
            return Variable::new(&s);
        }
        i += 100;
    }
}

struct Sd<'a> {
    avoid: &'a std::collections::BTreeSet<Name>,
}

impl Sd<'_> {
    fn go(&self, p: &Canon, env: &mut Vec<Variable>) -> Formula {
        if p.raw_seq_degree() == 0 {
            return Formula::True;
        }
        let best = p
            .components()
            .iter()
            .max_by_key(|c| Canon::single(c.single.clone()).raw_seq_degree())
            .expect("positive degree implies a component");
        let f = self.single(&best.single, env);
        if p.components().len() == 1 && !best.replicated {
            f
        } else {
            Formula::par(f, Formula::True)
        }
    }

    fn single(&self, s: &Single, env: &mut Vec<Variable>) -> Formula {
        match s {
            Single::Amb(n, b) => Formula::amb(atom(*n, env), self.go(b, env)),
            Single::Prefix(c, b) => Formula::cap_diamond(
                Capability::new(c.kind, atom(c.target, env)),
                self.go(b, env),
            ),
            Single::Msg(n, None) => Formula::MsgF(atom(*n, env)),
            Single::Msg(n, Some(k)) => Formula::out_diamond(atom(*n, env), self.go(k, env)),
            Single::Abs(b) => {
                let x = var_name(env.len(), self.avoid);
                env.push(x);
                let body = self.go(b, env);
                env.pop();
                Formula::exists(x, Formula::in_diamond(Atom::Free(x), body))
            }
        }
    }
}

/// `p ⊨ F` and every model of `F` has sequentiality degree at least
/// that of `p`.
pub fn sd_formula_canon(p: &Canon) -> Formula {
    let nf = eta_nf(p, false);
    let avoid = nf.free_names();
    Sd { avoid: &avoid }.go(&nf, &mut Vec::new())
}

/// Same for the depth degree.
pub fn dd_formula_canon(p: &Canon) -> Formula {
    if p.depth_degree() == 0 {
        return Formula::True;
    }
    let best = p
        .components()
        .iter()
        .max_by_key(|c| Canon::single(c.single.clone()).depth_degree())
        .unwrap();
    let Single::Amb(n, b) = &best.single else {
        unreachable!("only ambients have depth")
    };
    let f = Formula::amb(*n, dd_formula_canon(b));
    if p.components().len() == 1 && !best.replicated {
        f
    } else {
        Formula::par(f, Formula::True)
    }
}
