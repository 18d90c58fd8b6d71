//! Line-oriented blow-up scripts.
//!
//! ```text
//! state n=3 [index=r]
//! divisor 1 coeff=0 over=1
//! divisor 2 coeff=-2 over=0
//! meet 1,2
//! blow touching=1,2 codim=2 full=1
//! walk i=1 j=2 steps=5
//! query min over
//! ```
//!
//! `meet` also declares every sub-intersection. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{BlowupError, BlowupState, CenterSpec, Divisor, DivisorId};
use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    State { n: usize, index: Option<u32> },
    Divisor { id: DivisorId, coeff: Rational, over_point: bool },
    Meet(BTreeSet<DivisorId>),
    Blow(CenterSpec),
    Walk { i: DivisorId, j: DivisorId, steps: usize },
    QueryMin { over_only: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Blowup { line: usize, source: BlowupError },
}

impl ScriptError {
    pub fn line(&self) -> usize {
        match self {
            ScriptError::Syntax { line, .. } | ScriptError::Blowup { line, .. } => *line,
        }
    }
}

/// One reported result of a script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum ScriptEvent {
    Blow {
        line: usize,
        divisor: DivisorId,
        coeff: String,
        over_point: bool,
    },
    Walk {
        line: usize,
        divisors: Vec<DivisorId>,
        coeffs: Vec<String>,
    },
    Min {
        line: usize,
        over_only: bool,
        value: Option<String>,
    },
}

impl fmt::Display for ScriptEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptEvent::Blow {
                divisor,
                coeff,
                over_point,
                ..
            } => write!(f, "blow: divisor {divisor} a'={coeff} over={}", u8::from(*over_point)),
            ScriptEvent::Walk { divisors, coeffs, .. } => {
                let parts: Vec<String> = divisors
                    .iter()
                    .zip(coeffs)
                    .map(|(d, a)| format!("{d}:{a}"))
                    .collect();
                write!(f, "walk: {}", parts.join(" "))
            }
            ScriptEvent::Min { over_only, value, .. } => {
                let label = if *over_only { "min over" } else { "min" };
                match value {
                    Some(v) => write!(f, "{label} = {v}"),
                    None => write!(f, "{label} = none"),
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScriptRun {
    pub events: Vec<ScriptEvent>,
    pub state: BlowupState,
}

fn syntax(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_ids(line: usize, s: &str) -> Result<BTreeSet<DivisorId>, ScriptError> {
    if s.is_empty() {
        return Ok(BTreeSet::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<DivisorId>()
                .map_err(|_| syntax(line, format!("bad divisor id '{p}'")))
        })
        .collect()
}

fn parse_flag(line: usize, key: &str, s: &str) -> Result<bool, ScriptError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(syntax(line, format!("{key} must be 0 or 1, found '{s}'"))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<T, ScriptError> {
    s.parse()
        .map_err(|_| syntax(line, format!("bad value for {key}: '{s}'")))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = num.parse::<num_bigint::BigInt>().ok()?;
    let den = den.parse::<num_bigint::BigInt>().ok()?;
    if den == num_bigint::BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Splits `key=value` arguments; bare words are returned with an empty value.
fn keyed<'a>(
    line: usize,
    args: &[&'a str],
    allowed: &[&str],
) -> Result<BTreeMap<&'a str, &'a str>, ScriptError> {
    let mut out = BTreeMap::new();
    for a in args {
        let (k, v) = a.split_once('=').unwrap_or((a, ""));
        if !allowed.contains(&k) {
            return Err(syntax(line, format!("unexpected argument '{a}'")));
        }
        if out.insert(k, v).is_some() {
            return Err(syntax(line, format!("repeated argument '{k}'")));
        }
    }
    Ok(out)
}

fn required<'a>(line: usize, m: &BTreeMap<&str, &'a str>, key: &str) -> Result<&'a str, ScriptError> {
    m.get(key)
        .copied()
        .ok_or_else(|| syntax(line, format!("missing {key}=")))
}

fn parse_line(line: usize, text: &str) -> Result<Option<Command>, ScriptError> {
    let text = text.split('#').next().unwrap_or("").trim();
    let words: Vec<&str> = text.split_whitespace().collect();
    let Some((&head, args)) = words.split_first() else {
        return Ok(None);
    };
    let cmd = match head {
        "state" => {
            let m = keyed(line, args, &["n", "index"])?;
            Command::State {
                n: parse_num(line, "n", required(line, &m, "n")?)?,
                index: m
                    .get("index")
                    .map(|v| parse_num(line, "index", v))
                    .transpose()?,
            }
        }
        "divisor" => {
            let Some((id, rest)) = args.split_first() else {
                return Err(syntax(line, "divisor needs an id"));
            };
            let m = keyed(line, rest, &["coeff", "over"])?;
            let coeff = required(line, &m, "coeff")?;
            Command::Divisor {
                id: parse_num(line, "divisor id", id)?,
                coeff: parse_rational(coeff)
                    .ok_or_else(|| syntax(line, format!("bad rational '{coeff}'")))?,
                over_point: m
                    .get("over")
                    .map(|v| parse_flag(line, "over", v))
                    .transpose()?
                    .unwrap_or(false),
            }
        }
        "meet" => {
            let ids = parse_ids(line, &args.concat())?;
            if ids.is_empty() {
                return Err(syntax(line, "meet needs divisor ids"));
            }
            Command::Meet(ids)
        }
        "blow" => {
            let m = keyed(line, args, &["touching", "codim", "full", "over"])?;
            Command::Blow(CenterSpec {
                touching: parse_ids(line, m.get("touching").copied().unwrap_or(""))?,
                codim: parse_num(line, "codim", required(line, &m, "codim")?)?,
                full_stratum: parse_flag(line, "full", required(line, &m, "full")?)?,
                over_point_override: m
                    .get("over")
                    .map(|v| parse_flag(line, "over", v))
                    .transpose()?,
            })
        }
        "walk" => {
            let m = keyed(line, args, &["i", "j", "steps"])?;
            Command::Walk {
                i: parse_num(line, "i", required(line, &m, "i")?)?,
                j: parse_num(line, "j", required(line, &m, "j")?)?,
                steps: parse_num(line, "steps", required(line, &m, "steps")?)?,
            }
        }
        "query" => match args {
            ["min"] => Command::QueryMin { over_only: false },
            ["min", "over"] => Command::QueryMin { over_only: true },
            _ => return Err(syntax(line, "expected 'query min' or 'query min over'")),
        },
        other => return Err(syntax(line, format!("unknown command '{other}'"))),
    };
    Ok(Some(cmd))
}

/// Parses a script into commands tagged with 1-based line numbers.
pub fn parse_script(src: &str) -> Result<Vec<(usize, Command)>, ScriptError> {
    let mut out = Vec::new();
    for (i, text) in src.lines().enumerate() {
        if let Some(cmd) = parse_line(i + 1, text)? {
            out.push((i + 1, cmd));
        }
    }
    Ok(out)
}

struct Pending {
    n: usize,
    index: Option<u32>,
    divisors: Vec<Divisor>,
    meets: BTreeSet<BTreeSet<DivisorId>>,
}

enum Phase {
    Start,
    Declaring(Pending),
    Running(BlowupState),
}

/// Parses and executes a script. Declarations (`state`, `divisor`, `meet`)
/// must precede the first operation.
pub fn run_script(src: &str) -> Result<ScriptRun, ScriptError> {
    let commands = parse_script(src)?;
    let mut phase = Phase::Start;
    let mut events = Vec::new();
    let as_blowup = |line| move |source| ScriptError::Blowup { line, source };

    for (line, cmd) in commands {
        match (cmd, &mut phase) {
            (Command::State { n, index }, Phase::Start) => {
                phase = Phase::Declaring(Pending {
                    n,
                    index,
                    divisors: Vec::new(),
                    meets: BTreeSet::new(),
                });
            }
            (Command::State { .. }, _) => return Err(syntax(line, "state declared twice")),
            (_, Phase::Start) => return Err(syntax(line, "script must begin with 'state'")),
            (Command::Divisor { id, coeff, over_point }, Phase::Declaring(p)) => {
                p.divisors.push(Divisor::new(id, coeff, over_point));
                p.meets.insert(BTreeSet::from([id]));
            }
            (Command::Meet(ids), Phase::Declaring(p)) => {
                p.meets.insert(ids);
            }
            (Command::Divisor { .. } | Command::Meet(_), Phase::Running(_)) => {
                return Err(syntax(line, "declarations must precede operations"));
            }
            (op, current) => {
                if let Phase::Declaring(p) = current {
                    let p = std::mem::replace(
                        p,
                        Pending {
                            n: 0,
                            index: None,
                            divisors: Vec::new(),
                            meets: BTreeSet::new(),
                        },
                    );
                    let meets = super::downward_closure(p.meets);
                    let state = BlowupState::new(p.n, p.divisors, meets, p.index)
                        .map_err(as_blowup(line))?;
                    *current = Phase::Running(state);
                }
                let Phase::Running(state) = current else {
                    unreachable!("state was just finalized")
                };
                events.push(execute(line, state, op)?);
            }
        }
    }
    let state = match phase {
        Phase::Start => return Err(syntax(0, "empty script")),
        Phase::Declaring(p) => {
            BlowupState::new(p.n, p.divisors, super::downward_closure(p.meets), p.index)
                .map_err(as_blowup(0))?
        }
        Phase::Running(s) => s,
    };
    Ok(ScriptRun { events, state })
}

fn execute(line: usize, state: &mut BlowupState, op: Command) -> Result<ScriptEvent, ScriptError> {
    let err = |source| ScriptError::Blowup { line, source };
    Ok(match op {
        Command::Blow(center) => {
            let (next, id, a) = state.blow_up(&center).map_err(err)?;
            let over_point = next.divisor(id).is_some_and(|d| d.over_point);
            *state = next;
            ScriptEvent::Blow {
                line,
                divisor: id,
                coeff: a.to_string(),
                over_point,
            }
        }
        Command::Walk { i, j, steps } => {
            let first = state.divisors.keys().next_back().map_or(1, |m| m + 1);
            let (next, coeffs) = state.minus_infinity_walk(i, j, steps).map_err(err)?;
            *state = next;
            ScriptEvent::Walk {
                line,
                divisors: (first..first + coeffs.len() as u32).collect(),
                coeffs: coeffs.iter().map(Rational::to_string).collect(),
            }
        }
        Command::QueryMin { over_only } => ScriptEvent::Min {
            line,
            over_only,
            value: state.min_coefficient(over_only).map(|v| v.to_string()),
        },
        other => unreachable!("declaration {other:?} routed to execute"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_state_blow() {
        let run = run_script("state n=3\nblow touching= codim=2 full=0\n").unwrap();
        assert_eq!(run.events.len(), 1);
        assert_eq!(run.events[0].to_string(), "blow: divisor 1 a'=1 over=0");
    }

    #[test]
    fn walk_script() {
        let src = "# a walk\nstate n=3\ndivisor 1 coeff=0 over=1\ndivisor 2 coeff=-2 over=0\nmeet 1,2\nwalk i=1 j=2 steps=3\nquery min over\nquery min\n";
        let run = run_script(src).unwrap();
        assert_eq!(run.events[0].to_string(), "walk: 3:-1 4:-2 5:-3");
        assert_eq!(run.events[1].to_string(), "min over = -3");
        assert_eq!(run.events[2].to_string(), "min = -3");
    }

    #[test]
    fn rationals_and_index() {
        let src = "state n=3 index=2\ndivisor 1 coeff=-1/2 over=1\ndivisor 2 coeff=1/2\nmeet 1,2\nblow touching=1,2 codim=2 full=1\n";
        let run = run_script(src).unwrap();
        assert_eq!(run.events[0].to_string(), "blow: divisor 3 a'=1 over=1");
        assert!(run_script("state n=3 index=2\ndivisor 1 coeff=1/3\n").is_err());
    }

    #[test]
    fn meet_closes_downward() {
        let src = "state n=3\ndivisor 1 coeff=0\ndivisor 2 coeff=0\ndivisor 3 coeff=0\nmeet 1,2,3\nquery min\n";
        let run = run_script(src).unwrap();
        assert!(run.state.meets(&BTreeSet::from([2, 3])));
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(run_script("divisor 1 coeff=0").unwrap_err().line(), 1);
        assert_eq!(run_script("state n=3\nfrobnicate\n").unwrap_err().line(), 2);
        assert_eq!(run_script("state n=3\ndivisor 1 coeff=x\n").unwrap_err().line(), 2);
        let e = run_script("state n=3\ndivisor 1 coeff=0\ndivisor 2 coeff=0\nblow touching=1,2 codim=2 full=1\n")
            .unwrap_err();
        assert!(matches!(e, ScriptError::Blowup { line: 4, .. }));
        assert!(run_script("state n=3\nquery min\ndivisor 1 coeff=0\n").is_err());
        assert!(run_script("state n=3\nquery max\n").is_err());
    }

    #[test]
    fn events_serialize() {
        let run = run_script("state n=3\nblow touching= codim=3 full=0 over=1\nquery min over\n").unwrap();
        let json = serde_json::to_string(&run.events).unwrap();
        assert_eq!(
            json,
            r#"[{"event":"blow","line":2,"divisor":1,"coeff":"2","over_point":true},{"event":"min","line":3,"over_only":true,"value":"2"}]"#
        );
    }
}
