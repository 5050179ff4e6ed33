//! Turing machines and their encoding into ambients: ribbons, the
//! machine soup, the step lemmas and the loop construction.

mod check;
mod encode;
mod machine;

pub use check::{
    cleaner_check, immediate_accept_machine, loop_check, loop_search, never_accept_machine,
    ribbon_grow_check, search, step_check, verify_macro_steps, verify_macro_steps_with, LoopReport,
    MacroStep, Search,
};
pub use encode::{encode_configuration, encode_macro, Encoder, Macro, RESERVED};
pub use machine::{parse_word, tm_step, word_string, Digit, Move, TmConfig, TuringMachine, Word};
