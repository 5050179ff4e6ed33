//! Intensional bisimilarity, the approximants, logical equivalence and
//! barbed bisimilarity.

mod approx;
mod barbed;
mod bisim;
mod report;

pub use approx::{splits, stabilization_bound, Approx};
pub use bisim::{Bisim, BisimCache, BisimConfig};
pub use report::{Measure, MeasureReport};

use crate::congruence::{eta_congruent_canon, Canon, Single};
use crate::error::Error;
use crate::semantics::{Engine, Fuel, Verdict};
use crate::syntax::{Mode, Process};

fn prepare(p: &Process, q: &Process, mode: Mode, what: &str) -> Result<(Canon, Canon), Error> {
    p.require_closed(what)?;
    q.require_closed(what)?;
    p.check_mode(mode)?;
    q.check_mode(mode)?;
    Ok((Canon::from_process(p), Canon::from_process(q)))
}

/// Sync when some message carries a continuation.
pub fn infer_mode(p: &Canon) -> Mode {
    fn sync(c: &Canon) -> bool {
        c.components().iter().any(|comp| match &comp.single {
            Single::Msg(_, Some(_)) => true,
            s => s.body().is_some_and(sync),
        })
    }
    if sync(p) {
        Mode::Sync
    } else {
        Mode::Async
    }
}

pub fn bisim(p: &Process, q: &Process, cfg: &BisimConfig) -> Result<Verdict, Error> {
    Ok(bisim_explained(p, q, cfg, false)?.0)
}

/// Like [`bisim`], also returning the clause trace when `explain` is set.
pub fn bisim_explained(
    p: &Process,
    q: &Process,
    cfg: &BisimConfig,
    explain: bool,
) -> Result<(Verdict, Vec<String>), Error> {
    let (cp, cq) = prepare(p, q, cfg.mode, "bisim")?;
    let engine = Engine::new(cfg.fuel);
    let mut b = Bisim::new(&engine, cfg.mode, cfg.fresh_seed);
    if explain {
        b = b.explaining();
    }
    let v = b.check(&cp, &cq);
    Ok((v, b.explanation().to_vec()))
}

fn finite_pair(p: &Process, q: &Process, what: &str) -> Result<(Canon, Canon, Mode), Error> {
    p.require_closed(what)?;
    q.require_closed(what)?;
    let (cp, cq) = (Canon::from_process(p), Canon::from_process(q));
    for (c, t) in [(&cp, p), (&cq, q)] {
        if !c.is_finite() {
            return Err(Error::NotFinite(t.to_string()));
        }
    }
    let mode = if infer_mode(&cp) == Mode::Sync || infer_mode(&cq) == Mode::Sync {
        Mode::Sync
    } else {
        Mode::Async
    };
    Ok((cp, cq, mode))
}

/// `p ≃_i q`.
pub fn approximant(p: &Process, q: &Process, i: usize) -> Result<bool, Error> {
    let (cp, cq, mode) = finite_pair(p, q, "approximant")?;
    let engine = Engine::new(Fuel::DEFAULT);
    Ok(Approx::new(&engine, mode).approx(&cp, &cq, i))
}

/// The approximant at the level where it has stabilized for this pair.
pub fn approximant_stable(p: &Process, q: &Process) -> Result<bool, Error> {
    let (cp, cq, mode) = finite_pair(p, q, "approximant")?;
    let engine = Engine::new(Fuel::DEFAULT);
    Ok(Approx::new(&engine, mode).stable(&cp, &cq))
}

/// Logical equivalence. On the image-finite fragment the answer is the
/// eta congruence (asynchronous) or structural congruence (synchronous);
/// elsewhere it falls back to fueled bisimilarity.
pub fn logical_equiv(p: &Process, q: &Process, cfg: &BisimConfig) -> Result<Verdict, Error> {
    let (cp, cq) = prepare(p, q, cfg.mode, "logical_equiv")?;
    if cp.is_maifs() && cq.is_maifs() {
        return Ok(Verdict::from_bool(match cfg.mode {
            Mode::Async => eta_congruent_canon(&cp, &cq),
            Mode::Sync => cp == cq,
        }));
    }
    let engine = Engine::new(cfg.fuel);
    Ok(Bisim::new(&engine, cfg.mode, cfg.fresh_seed).check(&cp, &cq))
}

pub fn barbed_bisim(p: &Process, q: &Process, fuel: Fuel) -> Result<Verdict, Error> {
    p.require_closed("barbed_bisim")?;
    q.require_closed("barbed_bisim")?;
    let engine = Engine::new(fuel);
    Ok(barbed::barbed(
        &engine,
        &Canon::from_process(p),
        &Canon::from_process(q),
    ))
}

pub fn measure_report(p: &Process, q: &Process) -> Result<MeasureReport, Error> {
    p.require_closed("measure_report")?;
    q.require_closed("measure_report")?;
    Ok(report::report(
        &Canon::from_process(p),
        &Canon::from_process(q),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s, Mode::Async).unwrap()
    }

    fn ps(s: &str) -> Process {
        parse_process(s, Mode::Sync).unwrap()
    }

    #[test]
    fn eta_pair_depends_on_mode() {
        let cfg = BisimConfig::default();
        assert_eq!(
            logical_equiv(&p("(x)((x)0 | <x>)"), &p("(x)0"), &cfg).unwrap(),
            Verdict::True
        );
        let sync = BisimConfig::with_mode(Mode::Sync);
        assert_eq!(
            logical_equiv(&ps("(x)((x)0 | <x>.0)"), &ps("(x)0"), &sync).unwrap(),
            Verdict::False
        );
        assert_eq!(
            bisim(&ps("(x)((x)0 | <x>.0)"), &ps("(x)0"), &sync).unwrap(),
            Verdict::False
        );
    }

    #[test]
    fn mode_mismatch_and_open_terms() {
        let sync = BisimConfig::with_mode(Mode::Sync);
        assert!(matches!(
            bisim(&p("<n>"), &p("<n>"), &sync),
            Err(Error::ModeMismatch(_))
        ));
        let open = crate::syntax::parse_process_with(
            "<x>",
            &crate::syntax::ParseOptions {
                free_vars: vec!["x".into()],
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(
            bisim(&open, &p("0"), &BisimConfig::default()),
            Err(Error::OpenTerm(_))
        ));
        assert!(matches!(
            approximant(&p("!a[0]"), &p("0"), 1),
            Err(Error::NotFinite(_))
        ));
    }

    #[test]
    fn measures() {
        let r = measure_report(&p("0"), &p("in n.0")).unwrap();
        assert!(!r.sd.equal() && r.certifies_inequivalence());
        assert!(measure_report(&p("a[<m>]"), &p("a[<m>]"))
            .unwrap()
            .all_equal());
    }

    #[test]
    fn explain_lists_clauses() {
        let (v, lines) = bisim_explained(
            &p("a[in n.0]"),
            &p("a[out n.0]"),
            &BisimConfig::default(),
            true,
        )
        .unwrap();
        assert_eq!(v, Verdict::False);
        assert!(lines[0].starts_with("ambient"));
        assert!(lines.iter().any(|l| l.trim_start().starts_with("prefix")));
    }
}
