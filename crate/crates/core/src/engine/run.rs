//! Single runs driven by a [`RandomSource`].

use crate::error::Result;
use crate::random::RandomSource;
use crate::transcript::{Event, Transcript};

use super::program::{Instr, Program, ProverScript};
use super::state::{symbol, State};
use super::step::{self, Kind, Label};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// The verifier rejected at the named check.
    Reject { check: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        *self == Verdict::Accept
    }
}

/// Peak simultaneous card counts on the table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Usage {
    pub encoding: usize,
    pub marking: usize,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub transcript: Transcript,
    pub usage: Usage,
    /// Table state after the last instruction.
    pub state: State,
}

pub(crate) fn to_event(program: &Program, label: &Label) -> Option<Event> {
    match label {
        Label::Reveal(tag, codes) => Some(Event::reveal(program.tag(*tag), codes.iter().map(|&c| symbol(c)).collect())),
        Label::Action(tag) => Some(Event::action(program.tag(*tag))),
        _ => None,
    }
}

/// Execute `program` once. A rejection stops the run; the transcript then
/// ends with an `ACTION rejected` event.
pub fn run(program: &Program, script: &ProverScript, rs: &mut dyn RandomSource) -> Result<RunOutcome> {
    let mut st = State::new(program.positions, program.regs);
    let mut transcript = Transcript::default();
    let mut usage = Usage::default();
    for instr in &program.instrs {
        if st.rejected.is_some() {
            break;
        }
        match step::kind(instr) {
            Kind::Det => step::apply_det(instr, &mut st, script)?,
            Kind::Random => step::apply_random(instr, &mut st, rs)?,
            Kind::Event => {
                if let Some(e) = step::apply_event(instr, &mut st)?.and_then(|l| to_event(program, &l)) {
                    transcript.push(e);
                }
            }
            Kind::Sim => {
                let Instr::SimEmit { tag, kind } = instr else { unreachable!() };
                let outcomes = kind.outcomes().ok_or_else(|| crate::Error::NotSimulatable(program.tag(*tag).to_string()))?;
                let pick = rs.draw(outcomes.len());
                transcript.push(Event::reveal(program.tag(*tag), outcomes[pick].clone()));
            }
        }
        let (enc, mark) = st.usage();
        usage.encoding = usage.encoding.max(enc);
        usage.marking = usage.marking.max(mark);
    }
    let verdict = match st.rejected {
        None => Verdict::Accept,
        Some(c) => {
            transcript.push(Event::action("rejected"));
            Verdict::Reject { check: program.check(c).to_string() }
        }
    };
    Ok(RunOutcome { verdict, transcript, usage, state: st })
}
