use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::term::{Atom, Process};

const BINDER_BASES: &[&str] = &["x", "y", "z", "u", "v", "w"];

/// Prints a process in the surface grammar. Binders get the first spelling
/// from x, y, z, u, v, w, x1, ... that clashes neither with a free
/// identifier nor with an enclosing binder, so reparsing gives back the
/// same de Bruijn term.
pub fn print_process(p: &Process) -> String {
    let mut avoid: BTreeSet<String> = p.free_names().iter().map(|n| n.to_string()).collect();
    avoid.extend(p.free_vars().iter().map(|v| v.to_string()));
    let mut printer = Printer {
        out: String::new(),
        avoid,
        binders: Vec::new(),
    };
    printer.par(p);
    printer.out
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_process(self))
    }
}

struct Printer {
    out: String,
    avoid: BTreeSet<String>,
    binders: Vec<String>,
}

impl Printer {
    fn binder_name(&self) -> String {
        for round in 0.. {
            for base in BINDER_BASES {
                let candidate = if round == 0 {
                    base.to_string()
                } else {
                    format!("{base}{round}")
                };
                if !self.avoid.contains(&candidate) && !self.binders.contains(&candidate) {
                    return candidate;
                }
            }
        }
        unreachable!()
    }

    fn atom(&mut self, a: Atom) {
        match a {
            Atom::Name(n) => {
                let _ = write!(self.out, "{n}");
            }
            Atom::Free(v) => {
                let _ = write!(self.out, "{v}");
            }
            Atom::Bound(i) => {
                let depth = self.binders.len();
                if (i as usize) < depth {
                    let s = self.binders[depth - 1 - i as usize].clone();
                    self.out.push_str(&s);
                } else {
                    let _ = write!(self.out, "#{}", i as usize - depth);
                }
            }
        }
    }

    fn par(&mut self, p: &Process) {
        match p {
            Process::Par(a, b) => {
                // `|` reads right-associated, so a left-nested Par needs parentheses.
                if matches!(**a, Process::Par(..)) {
                    self.unary(a);
                } else {
                    self.par(a);
                }
                self.out.push_str(" | ");
                self.par(b);
            }
            other => self.unary(other),
        }
    }

    fn unary(&mut self, p: &Process) {
        match p {
            Process::Nil => self.out.push('0'),
            Process::Par(..) => {
                self.out.push('(');
                self.par(p);
                self.out.push(')');
            }
            Process::Repl(body) => {
                self.out.push('!');
                self.unary(body);
            }
            Process::Prefix(cap, body) => {
                self.out.push_str(cap.kind.keyword());
                self.out.push(' ');
                self.atom(cap.target);
                self.out.push('.');
                self.unary(body);
            }
            Process::Amb(n, body) => {
                self.atom(*n);
                self.out.push('[');
                self.par(body);
                self.out.push(']');
            }
            Process::Msg(n, cont) => {
                self.out.push('<');
                self.atom(*n);
                self.out.push('>');
                if let Some(k) = cont {
                    self.out.push('.');
                    self.unary(k);
                }
            }
            Process::Abs(body) => {
                let x = self.binder_name();
                let _ = write!(self.out, "({x})");
                self.binders.push(x);
                self.unary(body);
                self.binders.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;
    use crate::syntax::{parse_process, Mode};

    #[test]
    fn simple_prints() {
        assert_eq!(print_process(&nil()), "0");
        assert_eq!(
            print_process(&par([msg("n"), abs("x", nil())])),
            "<n> | (x)0"
        );
        assert_eq!(
            print_process(&in_("n", par([amb("a", nil()), msg("b")]))),
            "in n.(a[0] | <b>)"
        );
    }

    #[test]
    fn binders_avoid_free_names() {
        let p = parse_process("(y)(<y> | x[0])", Mode::Async).unwrap();
        let s = print_process(&p);
        assert_eq!(s, "(y)(<y> | x[0])");
        let q = parse_process("(a)(b)<a>", Mode::Async).unwrap();
        assert_eq!(print_process(&q), "(x)(y)<x>");
        assert_eq!(parse_process(&print_process(&q), Mode::Async).unwrap(), q);
    }
}
