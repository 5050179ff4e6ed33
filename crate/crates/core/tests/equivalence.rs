mod common;

use ambients::congruence::eta_congruent;
use ambients::equivalence::{
    approximant, approximant_stable, barbed_bisim, bisim, bisim_explained, logical_equiv,
    measure_report, BisimConfig,
};
use ambients::semantics::{Fuel, Verdict};
use ambients::syntax::{parse_process, Mode, Process};
use proptest::prelude::*;

fn p(s: &str) -> Process {
    parse_process(s, Mode::Async).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn ps(s: &str) -> Process {
    parse_process(s, Mode::Sync).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn bi(a: &str, b: &str) -> Verdict {
    bisim(&p(a), &p(b), &BisimConfig::default()).unwrap()
}

const R: &str = "!open n.in n.out n.in n.out n.n[0]";

#[test]
fn bisimilarity() {
    assert_eq!(bi("a[in b.0] | <c>", "<c> | a[in b.0]"), Verdict::True);
    assert_eq!(bi("in n.in n.0", "in n.0 | in n.0"), Verdict::False);
    assert_eq!(bi("(x)((x)0 | <x>)", "(x)0"), Verdict::True);
    assert_eq!(bi("(x)<x>", "0"), Verdict::False);
    assert_eq!(
        bi(&format!("{R} | n[0]"), &format!("{R} | in n.out n.n[0]")),
        Verdict::False
    );
    assert_eq!(
        bi(
            &format!("out n.({R} | n[0])"),
            &format!("out n.({R} | in n.out n.n[0])")
        ),
        Verdict::True
    );
}

#[test]
fn explanation_is_produced_on_failure() {
    let (v, lines) =
        bisim_explained(&p("in n.0"), &p("out n.0"), &BisimConfig::default(), true).unwrap();
    assert_eq!(v, Verdict::False);
    assert!(!lines.is_empty());
}

#[test]
fn approximants() {
    assert!(approximant(&p("in n.0"), &p("a[0]"), 0).unwrap());
    assert!(!approximant(&p("in n.0"), &p("out n.0"), 1).unwrap());
    assert!(approximant_stable(&p("(x)((x)0 | <x>)"), &p("(x)0")).unwrap());
    assert!(!approximant_stable(&p("in n.in n.0"), &p("in n.0 | in n.0")).unwrap());
}

#[test]
fn approximants_decrease() {
    let pairs = [
        ("in n.in n.0", "in n.0 | in n.0"),
        ("a[in b.0]", "a[in b.in b.0]"),
    ];
    for (a, b) in pairs {
        let verdicts: Vec<bool> = (0..6)
            .map(|i| approximant(&p(a), &p(b), i).unwrap())
            .collect();
        assert!(verdicts.windows(2).all(|w| w[0] >= w[1]), "{verdicts:?}");
        assert!(verdicts[0]);
    }
}

#[test]
fn logical_equivalence() {
    let cfg = BisimConfig::default();
    assert_eq!(
        logical_equiv(&p("!a[0] | a[0]"), &p("!a[0]"), &cfg).unwrap(),
        Verdict::True
    );
    assert_eq!(
        logical_equiv(&p("(x)((x)0 | <x>)"), &p("(x)0"), &cfg).unwrap(),
        Verdict::True
    );
    let sync = BisimConfig::with_mode(Mode::Sync);
    assert_eq!(
        logical_equiv(&ps("(x)((x)0 | <x>.0)"), &ps("(x)0"), &sync).unwrap(),
        Verdict::False
    );
    let v = logical_equiv(
        &p(&format!("out n.({R} | n[0])")),
        &p(&format!("out n.({R} | in n.out n.n[0])")),
        &cfg,
    )
    .unwrap();
    assert_eq!(v, Verdict::True);
}

#[test]
fn barbed() {
    assert_eq!(
        barbed_bisim(&p("(x)<x>"), &p("0"), Fuel::DEFAULT).unwrap(),
        Verdict::True
    );
    assert_eq!(
        barbed_bisim(&p("in n.in n.0"), &p("in n.0 | in n.0"), Fuel::DEFAULT).unwrap(),
        Verdict::True
    );
    assert_eq!(
        barbed_bisim(&p("n[0]"), &p("m[0]"), Fuel::DEFAULT).unwrap(),
        Verdict::False
    );
    assert_eq!(
        barbed_bisim(&p("open m.0 | m[n[0]]"), &p("n[0]"), Fuel::DEFAULT).unwrap(),
        Verdict::False
    );
}

#[test]
fn measures() {
    let r = measure_report(&p("<n> | in a.0"), &p("<n> | in a.0 | 0")).unwrap();
    assert!(r.sd.equal() && r.dd.equal());
    assert!(r.op.unwrap().equal() && r.op_mess.unwrap().equal());
    let r = measure_report(&p("a[b[0]]"), &p("a[0]")).unwrap();
    assert!(!r.dd.equal());
    assert_eq!((r.dd.left, r.dd.right), (2, 1));
    assert!(measure_report(&p("!a[0]"), &p("a[0]"))
        .unwrap()
        .op
        .is_none());
}

#[test]
fn oracles_agree_on_random_finite_pairs() {
    let cfg = BisimConfig::default();
    for seed in 0..150u64 {
        let a = common::Gen::finite(seed).process(3);
        let b = if seed % 2 == 0 {
            common::eta_expand_random(&mut common::rng(seed), &a)
        } else {
            common::Gen::finite(seed + 1000).process(3)
        };
        let v = bisim(&a, &b, &cfg).unwrap().as_bool().unwrap();
        assert_eq!(v, approximant_stable(&a, &b).unwrap(), "{a} / {b}");
        assert_eq!(v, eta_congruent(&a, &b), "{a} / {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bisim_is_reflexive_and_symmetric(a in common::arb_finite(), b in common::arb_finite()) {
        let cfg = BisimConfig::default();
        prop_assert_eq!(bisim(&a, &a, &cfg).unwrap(), Verdict::True);
        prop_assert_eq!(bisim(&a, &b, &cfg).unwrap(), bisim(&b, &a, &cfg).unwrap());
    }
}
