//! Formula parser.
//!
//! ```text
//! A ::= T | F | 0 | ~A | <>A | A \/ A | A /\ A | A |> A | A | A | A @ n
//!     | forall x. A | exists x. A | n[A] | (A)
//!     | <in n>.A | [in n].A | <n> | <!n>.A | <?n>.A | [?n].A
//!     | !<in n>.A | !<n> | !<?>.A | !n[A] | @free n
//! ```
//! Loosest to tightest: `\/`, `/\`, `|>` (right associative), `|`,
//! postfix `@`, unary. Quantifier bodies extend as far right as possible.

use super::formula::Formula;
use crate::error::Error;
use crate::syntax::lexer::{Cursor, Tok};
use crate::syntax::{Atom, CapKind, Capability, Name, Variable};

const RESERVED: &[&str] = &["in", "out", "open", "forall", "exists"];

pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = FParser {
        cur: Cursor::new(text)?,
        binders: Vec::new(),
    };
    let f = p.or()?;
    p.cur.expect_eof()?;
    Ok(f)
}

struct FParser<'a> {
    cur: Cursor<'a>,
    binders: Vec<String>,
}

fn cap_kind(word: &str) -> Option<CapKind> {
    match word {
        "in" => Some(CapKind::In),
        "out" => Some(CapKind::Out),
        "open" => Some(CapKind::Open),
        _ => None,
    }
}

impl FParser<'_> {
    fn or(&mut self) -> Result<Formula, Error> {
        let mut f = self.and()?;
        while self.cur.eat_sym("\\/") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, Error> {
        let mut f = self.guarantee()?;
        while self.cur.eat_sym("/\\") {
            f = Formula::and(f, self.guarantee()?);
        }
        Ok(f)
    }

    fn guarantee(&mut self) -> Result<Formula, Error> {
        let f = self.par()?;
        if self.cur.eat_sym("|>") {
            return Ok(Formula::guarantee(f, self.guarantee()?));
        }
        Ok(f)
    }

    fn par(&mut self) -> Result<Formula, Error> {
        let mut f = self.postfix()?;
        while self.cur.eat_sym("|") {
            f = Formula::par(f, self.postfix()?);
        }
        Ok(f)
    }

    fn postfix(&mut self) -> Result<Formula, Error> {
        let mut f = self.unary()?;
        while self.cur.eat_sym("@") {
            f = Formula::at(f, self.atom()?);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Atom, Error> {
        let id = match self.cur.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.cur.bump();
                s
            }
            _ => {
                return Err(self.cur.error(format!(
                    "expected a name or variable, found {}",
                    self.cur.describe()
                )))
            }
        };
        Ok(if self.binders.contains(&id) {
            Atom::Free(Variable::new(&id))
        } else {
            Atom::Name(Name::new(&id))
        })
    }

    fn cap(&mut self, word: &str) -> Result<Capability, Error> {
        let kind = cap_kind(word).ok_or_else(|| {
            self.cur
                .error(format!("expected a capability, found '{word}'"))
        })?;
        self.cur.bump();
        Ok(Capability::new(kind, self.atom()?))
    }

    fn dot_body(&mut self) -> Result<Formula, Error> {
        self.cur.expect_sym(".")?;
        self.unary()
    }

    fn quantifier(&mut self, exists: bool) -> Result<Formula, Error> {
        self.cur.bump();
        let x = self.cur.expect_ident()?;
        self.cur.expect_sym(".")?;
        self.binders.push(x.clone());
        let body = self.or();
        self.binders.pop();
        let v = Variable::new(&x);
        Ok(if exists {
            Formula::exists(v, body?)
        } else {
            Formula::forall(v, body?)
        })
    }

    fn ident_at(&self, k: usize) -> Option<String> {
        match self.cur.peek_at(k) {
            Tok::Ident(s) => Some(s.clone()),
            _ => None,
        }
    }

    fn unary(&mut self) -> Result<Formula, Error> {
        match self.cur.peek().clone() {
            Tok::Zero => {
                self.cur.bump();
                Ok(Formula::Void)
            }
            Tok::Sym("~") => {
                self.cur.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Sym("<>") => {
                self.cur.bump();
                Ok(Formula::sometime(self.unary()?))
            }
            Tok::Sym("(") => {
                self.cur.bump();
                let f = self.or()?;
                self.cur.expect_sym(")")?;
                Ok(f)
            }
            Tok::Sym("<") => {
                self.cur.bump();
                if self.cur.eat_sym("?") {
                    let n = self.atom()?;
                    self.cur.expect_sym(">")?;
                    return Ok(Formula::in_diamond(n, self.dot_body()?));
                }
                if self.cur.eat_sym("!") {
                    let n = self.atom()?;
                    self.cur.expect_sym(">")?;
                    return Ok(Formula::out_diamond(n, self.dot_body()?));
                }
                match self.ident_at(0) {
                    Some(w) if cap_kind(&w).is_some() => {
                        let c = self.cap(&w)?;
                        self.cur.expect_sym(">")?;
                        Ok(Formula::cap_diamond(c, self.dot_body()?))
                    }
                    _ => {
                        let n = self.atom()?;
                        self.cur.expect_sym(">")?;
                        Ok(Formula::MsgF(n))
                    }
                }
            }
            Tok::Sym("[") => {
                self.cur.bump();
                if self.cur.eat_sym("?") {
                    let n = self.atom()?;
                    self.cur.expect_sym("]")?;
                    return Ok(Formula::in_box(n, self.dot_body()?));
                }
                let w = self.ident_at(0).unwrap_or_default();
                let c = self.cap(&w)?;
                self.cur.expect_sym("]")?;
                Ok(Formula::cap_box(c, self.dot_body()?))
            }
            Tok::Sym("!") => {
                self.cur.bump();
                if self.cur.eat_sym("<") {
                    if self.cur.eat_sym("?") {
                        self.cur.expect_sym(">")?;
                        return Ok(Formula::repl_input(self.dot_body()?));
                    }
                    return match self.ident_at(0) {
                        Some(w) if cap_kind(&w).is_some() => {
                            let c = self.cap(&w)?;
                            self.cur.expect_sym(">")?;
                            Ok(Formula::repl_cap(c, self.dot_body()?))
                        }
                        _ => {
                            let n = self.atom()?;
                            self.cur.expect_sym(">")?;
                            Ok(Formula::ReplMsg(n))
                        }
                    };
                }
                let n = self.atom()?;
                self.cur.expect_sym("[")?;
                let body = self.or()?;
                self.cur.expect_sym("]")?;
                Ok(Formula::repl_amb(n, body))
            }
            Tok::Sym("@") => {
                self.cur.bump();
                match self.ident_at(0).as_deref() {
                    Some("free") => {
                        self.cur.bump();
                        Ok(Formula::FreeName(self.atom()?))
                    }
                    _ => Err(self.cur.error(format!(
                        "expected 'free' after '@', found {}",
                        self.cur.describe()
                    ))),
                }
            }
            Tok::Ident(w) => {
                let amb_follows = *self.cur.peek_at(1) == Tok::Sym("[");
                match w.as_str() {
                    "T" if !amb_follows => {
                        self.cur.bump();
                        Ok(Formula::True)
                    }
                    "F" if !amb_follows => {
                        self.cur.bump();
                        Ok(Formula::falsity())
                    }
                    "forall" => self.quantifier(false),
                    "exists" => self.quantifier(true),
                    _ => {
                        let n = self.atom()?;
                        if !self.cur.eat_sym("[") {
                            return Err(self.cur.error(format!("expected '[' after '{w}'")));
                        }
                        let body = self.or()?;
                        self.cur.expect_sym("]")?;
                        Ok(Formula::amb(n, body))
                    }
                }
            }
            _ => Err(self
                .cur
                .error(format!("expected a formula, found {}", self.cur.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) {
        let f = parse_formula(s).unwrap();
        assert_eq!(f.to_string(), s, "printing {f:?}");
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn basics() {
        assert_eq!(parse_formula("T").unwrap(), Formula::True);
        assert_eq!(
            parse_formula("n[T] | 0").unwrap(),
            Formula::par(Formula::amb(Atom::name("n"), Formula::True), Formula::Void)
        );
        assert!(parse_formula("n[T").is_err());
        assert!(parse_formula("@ n").is_err());
    }

    #[test]
    fn round_trips() {
        for s in [
            "T",
            "F",
            "~(~0 | ~0)",
            "a[T] \\/ b[0] /\\ <>c[T]",
            "(a[T] \\/ b[T]) | 0",
            "0 |> 0 |> T",
            "(0 |> 0) |> T",
            "n[T] @ m @ k",
            "forall x. <x> \\/ x[0]",
            "(forall x. <x>) | T",
            "exists x. <?x>.<in x>.T",
            "[in n].T /\\ [?m].0",
            "<!n>.T",
            "!<in n>.T | !<m> | !<?>.0 | !k[T]",
            "@free n",
            "~exists x. @free x",
            "T[0]",
        ] {
            rt(s);
        }
    }

    #[test]
    fn precedence() {
        let f = parse_formula("~forall x. <x> | T").unwrap();
        let x = Variable::new("x");
        let body = Formula::par(Formula::MsgF(Atom::Free(x)), Formula::True);
        assert_eq!(f, Formula::not(Formula::forall(x, body)));
        let g = parse_formula("<in n>.T | 0").unwrap();
        assert!(matches!(g, Formula::ParF(..)));
    }
}
