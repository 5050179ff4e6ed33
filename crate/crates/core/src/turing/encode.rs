//! The ribbon and machine macros, built as process text and parsed.

use super::machine::{Digit, Move, TmConfig, TuringMachine, Word};
use crate::error::Error;
use crate::syntax::{parse_process, print_process, Mode, Process};

/// Names used by the encoding. Machine states must avoid them.
pub const RESERVED: &[&str] = &[
    "cell",
    "wo",
    "ext",
    "coin",
    "newcell",
    "msg",
    "ribbon_left",
    "start",
    "TM",
    "head",
    "cl_ack",
    "wr_ack",
    "mo",
    "cleaner",
    "runclean",
    "get_out",
    "ff",
    "tt",
];

const KEYWORDS: &[&str] = &["in", "out", "open"];

/// One macro with its parameters. Holes and continuations are processes.
#[derive(Clone, Debug)]
pub enum Macro {
    Cell(Digit, Process),
    Word(Word, Process),
    DeadExtCode,
    SendStart,
    ExtensorFrozen,
    ExtensorAlive,
    ExtensorDead,
    CleanInst,
    DeadCleanCode,
    FrozenRibb(Word),
    GrowingRibb(Word),
    WorkRibb(Word, Word, Process),
    OldRibb,
    Clear(Digit, Process),
    Write(Digit, Process),
    Become(Process),
    DoMove(Move, Process),
    /// `tcode(d_r, q_w, d_w, mv)`.
    Tcode(Digit, String, Digit, Move),
    /// `ff -> P + tt -> Q`.
    Choice(Process, Process),
    Code(String),
    TmSoup,
    TmStart,
    Tm(String),
    GetOut,
}

/// Encoder for one machine, parametric in the length of the input word.
pub struct Encoder<'m> {
    machine: &'m TuringMachine,
    word_len: usize,
}

fn text(p: &Process) -> String {
    format!("({})", print_process(p))
}

fn cell(d: Digit, hole: &str) -> String {
    format!("cell[{}[0] | !open wo | {hole}]", d.name())
}

fn word(w: &[Digit], hole: &str) -> String {
    w.iter()
        .rev()
        .fold(hole.to_string(), |acc, d| cell(*d, &acc))
}

const DEAD_EXT_CODE: &str =
    "!open coin.open newcell.in cell.coin[0] | !newcell[cell[ff[0] | !open wo | out ext]]";
const SEND_START: &str = "msg[out ext.!out cell | out ribbon_left.start[in TM]]";
const CLEAN_INST: &str =
    "open cleaner.open runclean | runclean[!open ff | !open tt | !open cell | !open wo]";
const DEAD_CLEAN_CODE: &str = "!open ff | !open tt | !open cell | !open wo";

fn ext_frozen() -> String {
    format!("ext[{DEAD_EXT_CODE} | open coin.{SEND_START}]")
}

fn ext_alive() -> String {
    format!("ext[coin[0] | {DEAD_EXT_CODE} | open coin.{SEND_START}]")
}

fn ext_dead() -> String {
    format!("ext[{DEAD_EXT_CODE}]")
}

fn clear(d: Digit, p: &str) -> String {
    format!(
        "wo[out head.open {}.cl_ack[in head]] | open cl_ack.{p}",
        d.name()
    )
}

fn write(d: Digit, p: &str) -> String {
    format!(
        "wo[out head.{}[0] | wr_ack[in head]] | open wr_ack.{p}",
        d.name()
    )
}

fn become_(p: &str) -> String {
    format!("mo[out head.open head.{p}] | in mo")
}

fn domove(mv: Move, p: &str) -> String {
    match mv {
        Move::Right => format!("in cell.{p}"),
        Move::Stay => p.to_string(),
        Move::Left => format!("out cell.{p}"),
    }
}

fn choice(p: &str, q: &str) -> String {
    format!("coin[in ff.out ff.{p}] | coin[in tt.out tt.{q}] | open coin")
}

fn tcode(read: Digit, state: &str, write_d: Digit, mv: Move) -> String {
    let tail = domove(mv, &format!("open {state}"));
    let tail = format!("({})", become_(&format!("in TM.{tail}")));
    let tail = format!("({})", write(write_d, &tail));
    clear(read, &tail)
}

impl<'m> Encoder<'m> {
    /// Rejects machines whose state names collide with the encoding's
    /// own names.
    pub fn new(machine: &'m TuringMachine, word_len: usize) -> Result<Encoder<'m>, Error> {
        for q in &machine.states {
            if RESERVED.contains(&q.as_str()) || KEYWORDS.contains(&q.as_str()) {
                return Err(Error::NameClash(q.clone()));
            }
        }
        Ok(Encoder { machine, word_len })
    }

    pub fn machine(&self) -> &TuringMachine {
        self.machine
    }

    fn state(&self, q: &str) -> Result<(), Error> {
        if self.machine.states.contains(q) {
            Ok(())
        } else {
            Err(Error::Machine(format!("unknown state '{q}'")))
        }
    }

    fn code(&self, q: &str) -> Result<String, Error> {
        self.state(q)?;
        if q == self.machine.accept {
            return Ok(format!("!{q}[get_out[0]]"));
        }
        let branch = |d: Digit| -> Result<String, Error> {
            let (q2, w, mv) = self.machine.transition(q, d).ok_or_else(|| {
                Error::Machine(format!("no transition for ({q}, {})", d.letter()))
            })?;
            Ok(format!("({})", tcode(d, q2, *w, *mv)))
        };
        let (bf, bt) = (branch(Digit::Ff)?, branch(Digit::Tt)?);
        Ok(format!(
            "!{q}[head[out TM.({})]] | !coin[in ff.out ff.{bf}] | !coin[in tt.out tt.{bt}]",
            choice(&bf, &bt)
        ))
    }

    fn getout(&self) -> String {
        let ins: String = "in cell.".repeat(self.word_len);
        format!(
            "!open get_out.out cell.get_out[0] | !open get_out.out ribbon_left.(cleaner[out TM.in ribbon_left] | coin[out TM.in ribbon_left.{ins}in ext] | open start.in ribbon_left.in cell.open {})",
            self.machine.start
        )
    }

    fn soup(&self) -> Result<String, Error> {
        let mut parts = Vec::new();
        for q in &self.machine.states {
            parts.push(self.code(q)?);
        }
        parts.push(self.getout());
        parts.push("!open mo".into());
        Ok(parts.join(" | "))
    }

    fn tm_start(&self) -> Result<String, Error> {
        Ok(format!(
            "TM[open start.in ribbon_left.in cell.open {} | {}]",
            self.machine.start,
            self.soup()?
        ))
    }

    fn tm(&self, q: &str) -> Result<String, Error> {
        self.state(q)?;
        Ok(format!("TM[open {q} | {}]", self.soup()?))
    }

    fn source(&self, m: &Macro) -> Result<String, Error> {
        Ok(match m {
            Macro::Cell(d, hole) => cell(*d, &text(hole)),
            Macro::Word(w, hole) => word(w, &text(hole)),
            Macro::DeadExtCode => DEAD_EXT_CODE.into(),
            Macro::SendStart => SEND_START.into(),
            Macro::ExtensorFrozen => ext_frozen(),
            Macro::ExtensorAlive => ext_alive(),
            Macro::ExtensorDead => ext_dead(),
            Macro::CleanInst => CLEAN_INST.into(),
            Macro::DeadCleanCode => DEAD_CLEAN_CODE.into(),
            Macro::FrozenRibb(w) => {
                format!("ribbon_left[{CLEAN_INST} | {}]", word(w, &ext_frozen()))
            }
            Macro::GrowingRibb(w) => {
                format!("ribbon_left[{CLEAN_INST} | {}]", word(w, &ext_alive()))
            }
            Macro::WorkRibb(w1, w2, hole) => {
                let inner = format!("{} | {}", text(hole), word(w2, &ext_dead()));
                format!("ribbon_left[{CLEAN_INST} | {}]", word(w1, &inner))
            }
            Macro::OldRibb => format!("ribbon_left[{DEAD_CLEAN_CODE} | {}]", ext_dead()),
            Macro::Clear(d, p) => clear(*d, &text(p)),
            Macro::Write(d, p) => write(*d, &text(p)),
            Macro::Become(p) => become_(&text(p)),
            Macro::DoMove(mv, p) => domove(*mv, &text(p)),
            Macro::Tcode(r, q, w, mv) => {
                self.state(q)?;
                tcode(*r, q, *w, *mv)
            }
            Macro::Choice(p, q) => choice(&text(p), &text(q)),
            Macro::Code(q) => self.code(q)?,
            Macro::TmSoup => self.soup()?,
            Macro::TmStart => self.tm_start()?,
            Macro::Tm(q) => self.tm(q)?,
            Macro::GetOut => self.getout(),
        })
    }

    pub fn encode(&self, m: &Macro) -> Result<Process, Error> {
        let src = self.source(m)?;
        parse_process(&src, Mode::Async)
            .map_err(|e| Error::Machine(format!("internal encoding error: {e} in {src}")))
    }

    /// `WorkRibb(w1, w2)[TM(q)]`.
    pub fn configuration(&self, c: &TmConfig) -> Result<Process, Error> {
        if c.left.is_empty() {
            return Err(Error::Precondition(format!(
                "configuration {c} has no cell under the head"
            )));
        }
        let tm = self.encode(&Macro::Tm(c.state.clone()))?;
        self.encode(&Macro::WorkRibb(c.left.clone(), c.right.clone(), tm))
    }

    /// `Q = !FrozenRibb(w) | !OldRibb | !open msg | !out cell | TMStart`.
    pub fn loop_context(&self, w: &[Digit]) -> Result<Process, Error> {
        let src = format!(
            "!{} | !{} | !open msg | !out cell | {}",
            self.source(&Macro::FrozenRibb(w.to_vec()))?,
            self.source(&Macro::OldRibb)?,
            self.tm_start()?
        );
        parse_process(&src, Mode::Async)
            .map_err(|e| Error::Machine(format!("internal encoding error: {e}")))
    }
}

/// `encode_macro` for a machine and input word.
pub fn encode_macro(m: &Macro, machine: &TuringMachine, w: &[Digit]) -> Result<Process, Error> {
    Encoder::new(machine, w.len())?.encode(m)
}

/// `WorkRibb(w1, w2)[TM(q)]` for the machine encoded with input `w`.
pub fn encode_configuration(
    c: &TmConfig,
    machine: &TuringMachine,
    w: &[Digit],
) -> Result<Process, Error> {
    Encoder::new(machine, w.len())?.configuration(c)
}
