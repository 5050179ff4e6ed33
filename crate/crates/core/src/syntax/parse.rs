use super::lexer::{Cursor, Tok};
use super::name::{Name, Variable};
use super::term::{Atom, CapKind, Capability, Mode, Process};
use crate::error::Error;

pub(crate) const PROCESS_KEYWORDS: &[&str] = &["in", "out", "open"];

#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub mode: Mode,
    /// Accept `in n` as `in n.0`.
    pub prefix_sugar: bool,
    /// Identifiers treated as free variables rather than names when unbound.
    pub free_vars: Vec<String>,
}

impl ParseOptions {
    pub fn new(mode: Mode) -> ParseOptions {
        ParseOptions {
            mode,
            prefix_sugar: true,
            free_vars: Vec::new(),
        }
    }
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions::new(Mode::Async)
    }
}

/// Parses a process with default options for `mode`.
pub fn parse_process(text: &str, mode: Mode) -> Result<Process, Error> {
    parse_process_with(text, &ParseOptions::new(mode))
}

pub fn parse_process_with(text: &str, opts: &ParseOptions) -> Result<Process, Error> {
    let mut parser = Parser {
        cur: Cursor::new(text)?,
        opts,
        binders: Vec::new(),
    };
    let p = parser.par()?;
    parser.cur.expect_eof()?;
    Ok(p)
}

struct Parser<'a, 'o> {
    cur: Cursor<'a>,
    opts: &'o ParseOptions,
    binders: Vec<String>,
}

impl Parser<'_, '_> {
    fn par(&mut self) -> Result<Process, Error> {
        let mut items = vec![self.unary()?];
        while self.cur.eat_sym("|") {
            items.push(self.unary()?);
        }
        Ok(Process::par_all(items))
    }

    fn unary(&mut self) -> Result<Process, Error> {
        match self.cur.peek().clone() {
            Tok::Zero => {
                self.cur.bump();
                Ok(Process::Nil)
            }
            Tok::Sym("!") => {
                self.cur.bump();
                Ok(Process::repl(self.unary()?))
            }
            Tok::Sym("<") => self.message(),
            Tok::Sym("(") => {
                self.cur.bump();
                let is_binder = matches!(self.cur.peek(), Tok::Ident(s) if !PROCESS_KEYWORDS.contains(&s.as_str()))
                    && *self.cur.peek_at(1) == Tok::Sym(")");
                if is_binder {
                    let x = self.cur.expect_ident()?;
                    self.cur.expect_sym(")")?;
                    self.binders.push(x);
                    let body = self.unary();
                    self.binders.pop();
                    Ok(Process::Abs(Box::new(body?)))
                } else {
                    let p = self.par()?;
                    self.cur.expect_sym(")")?;
                    Ok(p)
                }
            }
            Tok::Ident(word) => {
                let kind = match word.as_str() {
                    "in" => Some(CapKind::In),
                    "out" => Some(CapKind::Out),
                    "open" => Some(CapKind::Open),
                    _ => None,
                };
                if let Some(kind) = kind {
                    self.cur.bump();
                    let target = self.atom()?;
                    let body = if self.cur.eat_sym(".") {
                        self.unary()?
                    } else if self.opts.prefix_sugar {
                        Process::Nil
                    } else {
                        return Err(self.cur.error(format!(
                            "missing continuation after '{} {}'",
                            word,
                            self.atom_text(target)
                        )));
                    };
                    return Ok(Process::prefix(Capability::new(kind, target), body));
                }
                let name = self.atom()?;
                if !self.cur.is_sym("[") {
                    return Err(self
                        .cur
                        .error(format!("expected '[' after ambient name '{word}'")));
                }
                self.cur.bump();
                let body = if self.cur.is_sym("]") {
                    Process::Nil
                } else {
                    self.par()?
                };
                self.cur.expect_sym("]")?;
                Ok(Process::amb(name, body))
            }
            _ => Err(self
                .cur
                .error(format!("expected a process, found {}", self.cur.describe()))),
        }
    }

    fn message(&mut self) -> Result<Process, Error> {
        self.cur.expect_sym("<")?;
        let payload = self.atom()?;
        self.cur.expect_sym(">")?;
        match self.opts.mode {
            Mode::Async => {
                if self.cur.is_sym(".") {
                    return Err(self.cur.error("synchronous message in asynchronous mode"));
                }
                Ok(Process::msg(payload))
            }
            Mode::Sync => {
                if !self.cur.eat_sym(".") {
                    return Err(self.cur.error("asynchronous message in synchronous mode (expected '.' and a continuation)"));
                }
                let cont = self.unary()?;
                Ok(Process::msg_then(payload, cont))
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, Error> {
        let offset = self.cur.offset();
        let id = self.cur.expect_ident()?;
        if PROCESS_KEYWORDS.contains(&id.as_str()) {
            return Err(super::lexer::error_at(
                self.cur.text,
                offset,
                format!("keyword '{id}' used as a name"),
            ));
        }
        if let Some(pos) = self.binders.iter().rposition(|b| *b == id) {
            return Ok(Atom::Bound((self.binders.len() - 1 - pos) as u32));
        }
        if self.opts.free_vars.contains(&id) {
            return Ok(Atom::Free(Variable::new(&id)));
        }
        Ok(Atom::Name(Name::new(&id)))
    }

    fn atom_text(&self, a: Atom) -> String {
        match a {
            Atom::Name(n) => n.to_string(),
            Atom::Free(v) => v.to_string(),
            Atom::Bound(i) => self.binders[self.binders.len() - 1 - i as usize].clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;

    fn p(s: &str) -> Process {
        parse_process(s, Mode::Async).unwrap()
    }

    #[test]
    fn basics() {
        assert_eq!(p("0"), Process::Nil);
        assert_eq!(
            p("!a[in c.0] | open a.b[0]"),
            par([bang(amb("a", in_("c", nil()))), open("a", amb("b", nil()))])
        );
        assert_eq!(p("in n"), in_("n", nil()));
        assert_eq!(p("(x)<x>"), abs("x", msg_var("x")));
        assert_eq!(
            p("(x)x[0]"),
            abs("x", Process::amb(Atom::Free(Variable::new("x")), nil()))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(p("in n.0 | m[0]"), par([in_("n", nil()), amb("m", nil())]));
        assert_eq!(
            p("!a[0] | b[0]"),
            par([bang(amb("a", nil())), amb("b", nil())])
        );
        assert_eq!(p("(x)<x> | <y>"), par([abs("x", msg_var("x")), msg("y")]));
        assert_eq!(
            p("in n.(a[0] | b[0])"),
            in_("n", par([amb("a", nil()), amb("b", nil())]))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let opts = ParseOptions {
            prefix_sugar: false,
            ..ParseOptions::default()
        };
        match parse_process_with("in n", &opts) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_process("<n>.0", Mode::Async),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_process("<n>", Mode::Sync),
            Err(Error::Parse { .. })
        ));
        assert!(parse_process("<n>.0", Mode::Sync).is_ok());
        assert!(parse_process("a | ", Mode::Async).is_err());
        assert!(parse_process("in[0]", Mode::Async).is_err());
    }

    #[test]
    fn shadowing() {
        // The inner binder shadows the outer one.
        let t = p("(x)(x)<x>");
        assert_eq!(
            t,
            Process::Abs(Box::new(Process::Abs(Box::new(Process::msg(Atom::Bound(
                0
            ))))))
        );
        let t = p("(x)(y)<x>");
        assert_eq!(
            t,
            Process::Abs(Box::new(Process::Abs(Box::new(Process::msg(Atom::Bound(
                1
            ))))))
        );
    }
}
