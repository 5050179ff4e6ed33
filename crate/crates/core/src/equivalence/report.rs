//! Necessary conditions for bisimilarity: equal degrees and, on finite
//! eta-normal terms, equal prefix and message counts.

use std::fmt;

use crate::congruence::{eta_nf, Canon};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measure {
    pub left: usize,
    pub right: usize,
}

impl Measure {
    pub fn equal(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureReport {
    pub sd: Measure,
    pub dd: Measure,
    /// Only for finite terms.
    pub op: Option<Measure>,
    pub op_mess: Option<Measure>,
}

impl MeasureReport {
    pub fn all_equal(&self) -> bool {
        self.sd.equal()
            && self.dd.equal()
            && self.op.is_none_or(|m| m.equal())
            && self.op_mess.is_none_or(|m| m.equal())
    }

    /// Some measure differs, which rules out bisimilarity.
    pub fn certifies_inequivalence(&self) -> bool {
        !self.all_equal()
    }
}

impl fmt::Display for MeasureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |m: &Measure| {
            format!(
                "{}/{}{}",
                m.left,
                m.right,
                if m.equal() { "" } else { " (differs)" }
            )
        };
        write!(f, "sd {} dd {}", show(&self.sd), show(&self.dd))?;
        if let (Some(op), Some(mess)) = (&self.op, &self.op_mess) {
            write!(f, " OP {} OPmess {}", show(op), show(mess))?;
        }
        Ok(())
    }
}

pub fn report(p: &Canon, q: &Canon) -> MeasureReport {
    let (np, nq) = (eta_nf(p, false), eta_nf(q, false));
    let m = |f: &dyn Fn(&Canon) -> usize| Measure {
        left: f(&np),
        right: f(&nq),
    };
    let finite = p.is_finite() && q.is_finite();
    let procs = |c: &Canon| c.to_process();
    MeasureReport {
        sd: m(&|c| c.raw_seq_degree()),
        dd: m(&|c| c.depth_degree()),
        op: finite.then(|| m(&|c| procs(c).count_prefixes())),
        op_mess: finite.then(|| m(&|c| procs(c).count_messages())),
    }
}
