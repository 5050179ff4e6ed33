//! The Ambient Logic: formulas, satisfaction, distinguishing formulas and
//! degree formulas.

mod degree;
mod distinguish;
mod formula;
mod parse;
mod sat;

pub use degree::{dd_formula_canon, sd_formula_canon};
pub use distinguish::{distinguish_canon, Distinguisher};
pub use formula::{print_formula, Formula};
pub use parse::parse_formula;
pub use sat::{par_splits, satisfies, satisfies_with, GuaranteePolicy, Sat, SatConfig};

use crate::congruence::Canon;
use crate::equivalence::infer_mode;
use crate::error::Error;
use crate::syntax::{Mode, Process};

/// A formula that `p` satisfies and `q` does not, or `None` when the two
/// finite processes are bisimilar.
pub fn distinguish(p: &Process, q: &Process) -> Result<Option<Formula>, Error> {
    p.require_closed("distinguish")?;
    q.require_closed("distinguish")?;
    let (cp, cq) = (Canon::from_process(p), Canon::from_process(q));
    for (c, t) in [(&cp, p), (&cq, q)] {
        if !c.is_finite() {
            return Err(Error::NotFinite(t.to_string()));
        }
    }
    let mode = if infer_mode(&cp) == Mode::Sync {
        Mode::Sync
    } else {
        infer_mode(&cq)
    };
    distinguish_canon(&cp, &cq, mode)
}

pub fn sd_formula(p: &Process) -> Result<Formula, Error> {
    p.require_closed("sd_formula")?;
    Ok(sd_formula_canon(&Canon::from_process(p)))
}

pub fn dd_formula(p: &Process) -> Result<Formula, Error> {
    p.require_closed("dd_formula")?;
    Ok(dd_formula_canon(&Canon::from_process(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{Fuel, Verdict};
    use crate::syntax::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s, Mode::Async).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn sat(proc_: &str, formula: &str) -> Verdict {
        satisfies(
            &p(proc_),
            &f(formula),
            Fuel::DEFAULT,
            &GuaranteePolicy::default(),
        )
        .unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        assert_eq!(sat("0", "0"), Verdict::True);
        assert_eq!(
            sat("open a.b[0] | !a[in c.0]", "<>(b[T] | T)"),
            Verdict::True
        );
        assert_eq!(sat("n[0]", "@free n"), Verdict::True);
        assert_eq!(sat("0", "@free n"), Verdict::False);
        assert_eq!(sat("(x)<x>", "<?n>.<n>"), Verdict::True);
        assert_eq!(sat("a[0] | b[0]", "a[T] | b[0]"), Verdict::True);
        assert_eq!(sat("a[0]", "forall x. ~<x>"), Verdict::True);
        assert_eq!(sat("a[0]", "exists x. x[0]"), Verdict::True);
        assert_eq!(sat("0", "a[0] @ a"), Verdict::True);
        assert_eq!(sat("in n.0", "[in n].0"), Verdict::True);
        assert_eq!(sat("!<m>", "!<m>"), Verdict::True);
        assert_eq!(sat("!a[0] | a[0]", "!a[0]"), Verdict::True);
        assert_eq!(sat("!in n.0 | in n.0", "!<in n>.<in n>.0"), Verdict::True);
        assert_eq!(sat("!(x)0", "!<?>.T"), Verdict::True);
    }

    #[test]
    fn selectivity_is_enforced() {
        let e = satisfies(
            &p("!a[0] | a[b[0]]"),
            &f("!a[T]"),
            Fuel::DEFAULT,
            &GuaranteePolicy::default(),
        );
        assert!(matches!(e, Err(Error::Selectivity { .. })));
        let e = satisfies(
            &p("!a[0]"),
            &f("!<in n>.T"),
            Fuel::DEFAULT,
            &GuaranteePolicy::default(),
        );
        assert!(matches!(e, Err(Error::Precondition(_))));
        assert_eq!(sat("!in n.0 | in m.0", "!<in n>.<in n>.T"), Verdict::False);
    }

    #[test]
    fn guarantee() {
        let policy = GuaranteePolicy {
            witnesses: vec![p("n[0]")],
            enumeration_bound: 8,
        };
        let v = satisfies(&p("open n.0"), &f("n[0] |> <>0"), Fuel::DEFAULT, &policy).unwrap();
        assert_eq!(v, Verdict::True);
        let v = satisfies(&p("0"), &f("n[0] |> 0"), Fuel::DEFAULT, &policy).unwrap();
        assert_eq!(v, Verdict::False);
        let v = satisfies(&p("0"), &f("T |> T"), Fuel::DEFAULT, &policy).unwrap();
        assert!(v.is_unknown());
    }

    #[test]
    fn distinguishing() {
        for (a, b) in [
            ("0", "n[0]"),
            ("in n.in n.0", "in n.0 | in n.0"),
            ("(x)<x>", "0"),
            ("a[in b.0] | c[0]", "a[0] | c[0]"),
        ] {
            let form = distinguish(&p(a), &p(b)).unwrap().unwrap();
            assert_eq!(sat(a, &form.to_string()), Verdict::True, "{form}");
            assert_eq!(sat(b, &form.to_string()), Verdict::False, "{form}");
        }
        assert_eq!(
            distinguish(&p("0"), &p("n[0]")).unwrap(),
            Some(Formula::Void)
        );
        assert!(distinguish(&p("a[0]"), &p("a[0]")).unwrap().is_none());
    }

    #[test]
    fn degree_formulas() {
        assert_eq!(sd_formula(&p("0")).unwrap(), Formula::True);
        assert_eq!(sd_formula(&p("in n.0")).unwrap().to_string(), "<in n>.T");
        assert_eq!(sat("0", "<in n>.T"), Verdict::False);
        assert_eq!(dd_formula(&p("n[m[0]]")).unwrap().to_string(), "n[m[T]]");
        let g = sd_formula(&p("(x)in x.0")).unwrap();
        assert_eq!(g.to_string(), "exists x0. <?x0>.<in x0>.T");
        assert_eq!(sat("(x)in x.0", &g.to_string()), Verdict::True);
    }
}
