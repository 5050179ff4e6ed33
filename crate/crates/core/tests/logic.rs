mod common;

use ambients::equivalence::{bisim, BisimConfig};
use ambients::logic::{
    dd_formula, distinguish, parse_formula, print_formula, satisfies, satisfies_with, sd_formula,
    Formula, GuaranteePolicy, SatConfig,
};
use ambients::semantics::{Fuel, Verdict};
use ambients::syntax::{
    depth_degree, parse_process, seq_degree, Atom, CapKind, Capability, Mode, Process,
};
use ambients::Error;

fn p(s: &str) -> Process {
    parse_process(s, Mode::Async).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
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

fn check(proc_: &Process, formula: &Formula) -> Verdict {
    satisfies(proc_, formula, Fuel::DEFAULT, &GuaranteePolicy::default()).unwrap()
}

#[test]
fn satisfaction() {
    assert_eq!(sat("0", "0"), Verdict::True);
    assert_eq!(sat("a[0]", "0"), Verdict::False);
    assert_eq!(
        sat("open a.b[0] | !a[in c.0]", "<>(b[T] | T)"),
        Verdict::True
    );
    assert_eq!(sat("n[0]", "@free n"), Verdict::True);
    assert_eq!(sat("0", "@free n"), Verdict::False);
    assert_eq!(sat("(x)<x>", "<?n>.<n>"), Verdict::True);
    assert_eq!(sat("n[in m.0] | m[0]", "<>m[n[T]]"), Verdict::True);
    assert_eq!(sat("n[in m.0] | m[0]", "~<>m[n[T]] \\/ T"), Verdict::True);
    assert_eq!(sat("b[0]", "a[b[0]] @ a"), Verdict::True);
    assert_eq!(sat("a[b[0]]", "b[0] @ a"), Verdict::False);
    assert_eq!(sat("a[0] | a[0]", "a[0] | a[0]"), Verdict::True);
    assert_eq!(sat("a[0] | a[0]", "a[0]"), Verdict::False);
    assert_eq!(sat("a[0]", "forall x. ~<x>"), Verdict::True);
    assert_eq!(sat("out n.0", "<out n>.0 /\\ [out n].0"), Verdict::True);
}

#[test]
fn formula_constructors_match_parser() {
    let n = Atom::name("n");
    assert_eq!(f("<?n>.<n>"), Formula::in_diamond(n, Formula::MsgF(n)));
    assert_eq!(
        f("<in n>.T"),
        Formula::cap_diamond(Capability::named(CapKind::In, "n"), Formula::True)
    );
    assert_eq!(
        f("<>(b[T] | T)"),
        Formula::sometime(Formula::par(
            Formula::amb(Atom::name("b"), Formula::True),
            Formula::True
        ))
    );
}

#[test]
fn print_parse_round_trip() {
    let mut r = common::rng(5);
    for _ in 0..500 {
        let a = common::formula(&mut r, 4);
        let text = print_formula(&a);
        assert_eq!(parse_formula(&text).unwrap(), a, "{text}");
    }
}

#[test]
fn replicated_modalities_check_selectivity() {
    // The argument is checked against the whole replicated component.
    assert_eq!(sat("!in n.0", "!<in n>.<in n>.0"), Verdict::True);
    assert_eq!(sat("!<m>", "!<m>"), Verdict::True);
    assert_eq!(sat("!a[0]", "!a[0]"), Verdict::True);
    let err = satisfies(
        &p("!a[0] | a[b[0]]"),
        &f("!a[T]"),
        Fuel::DEFAULT,
        &GuaranteePolicy::default(),
    );
    assert!(matches!(err, Err(Error::Selectivity { .. })), "{err:?}");
    let shape = satisfies(
        &p("!a[0]"),
        &f("!<in n>.T"),
        Fuel::DEFAULT,
        &GuaranteePolicy::default(),
    );
    assert!(matches!(shape, Err(Error::Precondition(_))), "{shape:?}");
}

#[test]
fn guarantee_uses_witnesses() {
    let cfg = SatConfig {
        policy: GuaranteePolicy {
            witnesses: vec![p("n[0]")],
            enumeration_bound: 64,
        },
        ..SatConfig::default()
    };
    let v = satisfies_with(&p("open n.a[0]"), &f("n[0] |> <>a[0]"), &cfg).unwrap();
    assert_eq!(v, Verdict::True);
    let v = satisfies_with(&p("0"), &f("n[0] |> 0"), &cfg).unwrap();
    assert_eq!(v, Verdict::False);
}

#[test]
fn distinguishing_formulas() {
    assert_eq!(
        distinguish(&p("0"), &p("n[0]")).unwrap(),
        Some(Formula::Void)
    );
    assert_eq!(distinguish(&p("a[in b.0]"), &p("a[in b.0]")).unwrap(), None);
    let a = p("in n.in n.0");
    let b = p("in n.0 | in n.0");
    let g = distinguish(&a, &b).unwrap().unwrap();
    assert_eq!(check(&a, &g), Verdict::True);
    assert_eq!(check(&b, &g), Verdict::False);
    assert!(matches!(
        distinguish(&p("!a[0]"), &p("0")),
        Err(Error::NotFinite(_))
    ));
}

#[test]
fn distinguishing_formulas_on_random_pairs() {
    let cfg = BisimConfig::default();
    let mut found = 0;
    for seed in 0..200u64 {
        let a = common::Gen::finite(seed).process(3);
        let b = common::Gen::finite(seed + 7_000).process(3);
        let same = bisim(&a, &b, &cfg).unwrap() == Verdict::True;
        match distinguish(&a, &b).unwrap() {
            None => assert!(same, "{a} / {b}"),
            Some(g) => {
                assert!(!same);
                assert_eq!(check(&a, &g), Verdict::True, "{a} / {b}: {g}");
                assert_eq!(check(&b, &g), Verdict::False, "{a} / {b}: {g}");
                found += 1;
            }
        }
    }
    assert!(found > 100);
}

#[test]
fn degree_formulas() {
    assert_eq!(sd_formula(&p("0")).unwrap(), Formula::True);
    let g = sd_formula(&p("in n.0")).unwrap();
    assert_eq!(
        g,
        Formula::cap_diamond(Capability::named(CapKind::In, "n"), Formula::True)
    );
    assert_eq!(check(&p("0"), &g), Verdict::False);
    let d = dd_formula(&p("n[m[0]]")).unwrap();
    assert_eq!(check(&p("n[m[0]]"), &d), Verdict::True);
    assert_eq!(check(&p("n[0]"), &d), Verdict::False);
}

#[test]
fn degree_formulas_bound_degrees() {
    for seed in 0..150u64 {
        let a = common::Gen::finite(seed).process(3);
        let fs = sd_formula(&a).unwrap();
        let fd = dd_formula(&a).unwrap();
        assert_eq!(check(&a, &fs), Verdict::True, "{a}: {fs}");
        assert_eq!(check(&a, &fd), Verdict::True, "{a}: {fd}");
        for k in 0..5u64 {
            let b = common::Gen::finite(seed * 31 + k + 50_000).process(3);
            if check(&b, &fs) == Verdict::True {
                assert!(
                    seq_degree(&b).unwrap() >= seq_degree(&a).unwrap(),
                    "{b} |= {fs}"
                );
            }
            if check(&b, &fd) == Verdict::True {
                assert!(depth_degree(&b) >= depth_degree(&a), "{b} |= {fd}");
            }
        }
    }
}
