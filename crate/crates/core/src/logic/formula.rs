//! Formulas of the Ambient Logic, with the derived modalities taken as
//! primitive connectives.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Atom, Capability, Name, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ForallName(Variable, Box<Formula>),
    Sometime(Box<Formula>),
    Void,
    AmbF(Atom, Box<Formula>),
    ParF(Box<Formula>, Box<Formula>),
    At(Box<Formula>, Atom),
    Guarantee(Box<Formula>, Box<Formula>),
    CapDiamond(Capability, Box<Formula>),
    CapBox(Capability, Box<Formula>),
    MsgF(Atom),
    /// Synchronous output modality `<!n>.A`: `P ≡ <n>.P'` and `P' ==> ⊨ A`.
    OutDiamond(Atom, Box<Formula>),
    InDiamond(Atom, Box<Formula>),
    InBox(Atom, Box<Formula>),
    ReplCap(Capability, Box<Formula>),
    ReplMsg(Atom),
    ReplInput(Box<Formula>),
    ReplAmb(Atom, Box<Formula>),
    FreeName(Atom),
}

use Formula::*;

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Not(bx(a))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(bx(a), bx(b))
    }

    pub fn falsity() -> Formula {
        Formula::not(True)
    }

    /// `a /\ b`, sugar for `~(~a \/ ~b)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    /// Conjunction of all items; `T` when empty.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        items.dedup();
        let mut it = items.into_iter();
        let Some(first) = it.next() else { return True };
        it.fold(first, Formula::and)
    }

    pub fn forall(x: Variable, a: Formula) -> Formula {
        ForallName(x, bx(a))
    }

    /// `exists x. a`, sugar for `~forall x. ~a`.
    pub fn exists(x: Variable, a: Formula) -> Formula {
        Formula::not(Formula::forall(x, Formula::not(a)))
    }

    pub fn sometime(a: Formula) -> Formula {
        Sometime(bx(a))
    }

    pub fn amb(n: Atom, a: Formula) -> Formula {
        AmbF(n, bx(a))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        ParF(bx(a), bx(b))
    }

    pub fn at(a: Formula, n: Atom) -> Formula {
        At(bx(a), n)
    }

    pub fn guarantee(a: Formula, b: Formula) -> Formula {
        Guarantee(bx(a), bx(b))
    }

    pub fn cap_diamond(c: Capability, a: Formula) -> Formula {
        CapDiamond(c, bx(a))
    }

    pub fn cap_box(c: Capability, a: Formula) -> Formula {
        CapBox(c, bx(a))
    }

    pub fn out_diamond(n: Atom, a: Formula) -> Formula {
        OutDiamond(n, bx(a))
    }

    pub fn in_diamond(n: Atom, a: Formula) -> Formula {
        InDiamond(n, bx(a))
    }

    pub fn in_box(n: Atom, a: Formula) -> Formula {
        InBox(n, bx(a))
    }

    pub fn repl_cap(c: Capability, a: Formula) -> Formula {
        ReplCap(c, bx(a))
    }

    pub fn repl_input(a: Formula) -> Formula {
        ReplInput(bx(a))
    }

    pub fn repl_amb(n: Atom, a: Formula) -> Formula {
        ReplAmb(n, bx(a))
    }

    fn atoms(&self, out: &mut Vec<Atom>) {
        match self {
            AmbF(a, _)
            | At(_, a)
            | MsgF(a)
            | OutDiamond(a, _)
            | InDiamond(a, _)
            | InBox(a, _)
            | ReplMsg(a)
            | ReplAmb(a, _)
            | FreeName(a) => out.push(*a),
            CapDiamond(c, _) | CapBox(c, _) | ReplCap(c, _) => out.push(c.target),
            _ => {}
        }
    }

    fn children(&self) -> Vec<&Formula> {
        match self {
            True | Void | MsgF(_) | ReplMsg(_) | FreeName(_) => vec![],
            Not(a)
            | ForallName(_, a)
            | Sometime(a)
            | AmbF(_, a)
            | At(a, _)
            | CapDiamond(_, a)
            | CapBox(_, a)
            | OutDiamond(_, a)
            | InDiamond(_, a)
            | InBox(_, a)
            | ReplCap(_, a)
            | ReplInput(a)
            | ReplAmb(_, a) => vec![a],
            Or(a, b) | ParF(a, b) | Guarantee(a, b) => vec![a, b],
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            let mut atoms = Vec::new();
            f.atoms(&mut atoms);
            out.extend(atoms.into_iter().filter_map(Atom::as_name));
        });
        out
    }

    fn walk(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        fn go(f: &Formula, bound: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
            let mut atoms = Vec::new();
            f.atoms(&mut atoms);
            for a in atoms {
                if let Atom::Free(v) = a {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            if let ForallName(x, a) = f {
                bound.push(*x);
                go(a, bound, out);
                bound.pop();
            } else {
                for c in f.children() {
                    go(c, bound, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// `self{n/x}`, stopping at rebinding quantifiers.
    pub fn substitute(&self, x: Variable, n: Name) -> Formula {
        let at = |a: &Atom| {
            if *a == Atom::Free(x) {
                Atom::Name(n)
            } else {
                *a
            }
        };
        let cap = |c: &Capability| Capability::new(c.kind, at(&c.target));
        let s = |f: &Formula| bx(f.substitute(x, n));
        match self {
            True => True,
            Void => Void,
            Not(a) => Not(s(a)),
            Or(a, b) => Or(s(a), s(b)),
            ForallName(y, a) if *y == x => ForallName(*y, a.clone()),
            ForallName(y, a) => ForallName(*y, s(a)),
            Sometime(a) => Sometime(s(a)),
            AmbF(m, a) => AmbF(at(m), s(a)),
            ParF(a, b) => ParF(s(a), s(b)),
            At(a, m) => At(s(a), at(m)),
            Guarantee(a, b) => Guarantee(s(a), s(b)),
            CapDiamond(c, a) => CapDiamond(cap(c), s(a)),
            CapBox(c, a) => CapBox(cap(c), s(a)),
            MsgF(m) => MsgF(at(m)),
            OutDiamond(m, a) => OutDiamond(at(m), s(a)),
            InDiamond(m, a) => InDiamond(at(m), s(a)),
            InBox(m, a) => InBox(at(m), s(a)),
            ReplCap(c, a) => ReplCap(cap(c), s(a)),
            ReplMsg(m) => ReplMsg(at(m)),
            ReplInput(a) => ReplInput(s(a)),
            ReplAmb(m, a) => ReplAmb(at(m), s(a)),
            FreeName(m) => FreeName(at(m)),
        }
    }
}

// Printing. Levels, loosest first: \/ (0), /\ (1), |> (2, right
// associative), | (3), postfix @ (4), unary (5). Quantifier bodies extend
// as far right as possible, so a quantifier is printed bare only when
// nothing follows it.

fn atom_str(a: &Atom) -> String {
    match a {
        Atom::Name(n) => n.to_string(),
        Atom::Free(v) => v.as_str().to_string(),
        Atom::Bound(i) => format!("#{i}"),
    }
}

fn cap_str(c: &Capability) -> String {
    format!("{} {}", c.kind.keyword(), atom_str(&c.target))
}

enum View<'a> {
    And(&'a Formula, &'a Formula),
    Exists(Variable, &'a Formula),
    False,
    Plain,
}

fn view(f: &Formula) -> View<'_> {
    if let Not(inner) = f {
        match &**inner {
            True => return View::False,
            Or(a, b) => {
                if let (Not(a), Not(b)) = (&**a, &**b) {
                    return View::And(a, b);
                }
            }
            ForallName(x, body) => {
                if let Not(body) = &**body {
                    return View::Exists(*x, body);
                }
            }
            _ => {}
        }
    }
    View::Plain
}

fn write_f(f: &Formula, level: u8, last: bool, out: &mut String) {
    let paren = |out: &mut String, need: bool, body: &dyn Fn(&mut String, bool)| {
        if need {
            out.push('(');
            body(out, true);
            out.push(')');
        } else {
            body(out, last);
        }
    };
    match view(f) {
        View::False => return out.push('F'),
        View::And(a, b) => {
            return paren(out, level > 1, &|out, last| {
                write_f(a, 1, false, out);
                out.push_str(" /\\ ");
                write_f(b, 2, last, out);
            })
        }
        View::Exists(x, a) => {
            return paren(out, !last, &|out, _| {
                out.push_str(&format!("exists {}. ", x.as_str()));
                write_f(a, 0, true, out);
            })
        }
        View::Plain => {}
    }
    match f {
        True => out.push('T'),
        Void => out.push('0'),
        Or(a, b) => paren(out, level > 0, &|out, last| {
            write_f(a, 0, false, out);
            out.push_str(" \\/ ");
            write_f(b, 1, last, out);
        }),
        Guarantee(a, b) => paren(out, level > 2, &|out, last| {
            write_f(a, 3, false, out);
            out.push_str(" |> ");
            write_f(b, 2, last, out);
        }),
        ParF(a, b) => paren(out, level > 3, &|out, last| {
            write_f(a, 3, false, out);
            out.push_str(" | ");
            write_f(b, 4, last, out);
        }),
        At(a, n) => paren(out, level > 4, &|out, _| {
            write_f(a, 4, false, out);
            out.push_str(&format!(" @ {}", atom_str(n)));
        }),
        ForallName(x, a) => paren(out, !last, &|out, _| {
            out.push_str(&format!("forall {}. ", x.as_str()));
            write_f(a, 0, true, out);
        }),
        Not(a) => {
            out.push('~');
            write_f(a, 5, last, out);
        }
        Sometime(a) => {
            out.push_str("<>");
            write_f(a, 5, last, out);
        }
        AmbF(n, a) => {
            out.push_str(&atom_str(n));
            out.push('[');
            write_f(a, 0, true, out);
            out.push(']');
        }
        CapDiamond(c, a) => {
            out.push_str(&format!("<{}>.", cap_str(c)));
            write_f(a, 5, last, out);
        }
        CapBox(c, a) => {
            out.push_str(&format!("[{}].", cap_str(c)));
            write_f(a, 5, last, out);
        }
        MsgF(n) => out.push_str(&format!("<{}>", atom_str(n))),
        OutDiamond(n, a) => {
            out.push_str(&format!("<!{}>.", atom_str(n)));
            write_f(a, 5, last, out);
        }
        InDiamond(n, a) => {
            out.push_str(&format!("<?{}>.", atom_str(n)));
            write_f(a, 5, last, out);
        }
        InBox(n, a) => {
            out.push_str(&format!("[?{}].", atom_str(n)));
            write_f(a, 5, last, out);
        }
        ReplCap(c, a) => {
            out.push_str(&format!("!<{}>.", cap_str(c)));
            write_f(a, 5, last, out);
        }
        ReplMsg(n) => out.push_str(&format!("!<{}>", atom_str(n))),
        ReplInput(a) => {
            out.push_str("!<?>.");
            write_f(a, 5, last, out);
        }
        ReplAmb(n, a) => {
            out.push_str(&format!("!{}[", atom_str(n)));
            write_f(a, 0, true, out);
            out.push(']');
        }
        FreeName(n) => out.push_str(&format!("@free {}", atom_str(n))),
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_f(f, 0, true, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sugar_prints() {
        let n = Atom::name("n");
        assert_eq!(Formula::falsity().to_string(), "F");
        assert_eq!(Formula::and(True, Void).to_string(), "T /\\ 0");
        let f = Formula::par(Formula::amb(n, True), Void);
        assert_eq!(f.to_string(), "n[T] | 0");
        let x = Variable::new("x");
        let f = Formula::par(
            Formula::exists(x, Formula::in_diamond(Atom::Free(x), True)),
            True,
        );
        assert_eq!(f.to_string(), "(exists x. <?x>.T) | T");
        assert!(f.is_closed());
        assert_eq!(
            Formula::in_diamond(Atom::Free(x), True).free_vars().len(),
            1
        );
    }

    #[test]
    fn substitution_respects_binders() {
        let x = Variable::new("x");
        let f = Formula::or(
            Formula::MsgF(Atom::Free(x)),
            Formula::forall(x, Formula::MsgF(Atom::Free(x))),
        );
        let g = f.substitute(x, Name::new("n"));
        assert_eq!(g.to_string(), "<n> \\/ forall x. <x>");
    }
}
