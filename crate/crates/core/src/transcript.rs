//! The public record of a protocol run.

use std::fmt;

use crate::card::Symbol;
use crate::error::{Error, Result};

/// One publicly observable event.
///
/// Tags name public coordinates only (round, vertex, matrix row). Shuffle
/// outcomes and prover-private reads never appear here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    Reveal { tag: String, symbols: Vec<Symbol> },
    Action { tag: String },
}

impl Event {
    pub fn reveal(tag: &str, symbols: Vec<Symbol>) -> Self {
        Event::Reveal { tag: tag.to_string(), symbols }
    }

    pub fn action(tag: &str) -> Self {
        Event::Action { tag: tag.to_string() }
    }

    pub fn tag(&self) -> &str {
        match self {
            Event::Reveal { tag, .. } | Event::Action { tag } => tag,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Reveal { tag, symbols } => {
                let s: Vec<String> = symbols.iter().map(Symbol::to_string).collect();
                write!(f, "REVEAL {tag} {}", s.join(","))
            }
            Event::Action { tag } => write!(f, "ACTION {tag}"),
        }
    }
}

/// Ordered list of events.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn push(&mut self, event: Event) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Line-oriented text form, one event per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next(), parts.next()) {
                (Some("ACTION"), Some(tag), None, None) => events.push(Event::action(tag)),
                (Some("REVEAL"), Some(tag), Some(syms), None) => {
                    let symbols = syms
                        .split(',')
                        .map(str::parse)
                        .collect::<Result<Vec<Symbol>>>()
                        .map_err(|_| err("bad symbol list"))?;
                    events.push(Event::reveal(tag, symbols));
                }
                _ => return Err(err("expected REVEAL <tag> <symbols> or ACTION <tag>")),
            }
        }
        Ok(Transcript { events })
    }
}

impl FromIterator<Event> for Transcript {
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        Transcript { events: iter.into_iter().collect() }
    }
}
