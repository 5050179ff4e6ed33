//! Frozen subterms: the processes sitting under guards, instantiated over a
//! finite name set.

use std::collections::{BTreeSet, HashMap};

use super::canon::{Canon, Single};
use crate::syntax::Name;

/// `fr_N(P)` as a set of canonical forms.
///
/// Ambients contribute the frozen subterms of their body; synchronous
/// outputs guard their continuation like a capability does.
pub fn frozen_subterms(p: &Canon, names: &BTreeSet<Name>) -> BTreeSet<Canon> {
    let names: Vec<Name> = names.iter().copied().collect();
    let mut memo = HashMap::new();
    frozen(p, &names, &mut memo)
}

fn frozen(
    p: &Canon,
    names: &[Name],
    memo: &mut HashMap<Canon, BTreeSet<Canon>>,
) -> BTreeSet<Canon> {
    if let Some(hit) = memo.get(p) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    for c in p.components() {
        match &c.single {
            Single::Prefix(_, b) | Single::Msg(_, Some(b)) => {
                out.insert(b.clone());
                out.extend(frozen(b, names, memo));
            }
            Single::Amb(_, b) => out.extend(frozen(b, names, memo)),
            Single::Msg(_, None) => {}
            Single::Abs(b) => {
                for &n in names {
                    let inst = b.instantiate(n);
                    out.extend(frozen(&inst, names, memo));
                    out.insert(inst);
                }
            }
        }
    }
    memo.insert(p.clone(), out.clone());
    out
}
