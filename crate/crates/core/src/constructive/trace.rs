//! Append-only construction traces: every choice, oracle exchange, color
//! query, and node evaluation, in order. Re-executing against the recorded
//! oracle answers must reproduce the trace byte for byte.

use crate::Elem;

use super::ConstructiveError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeStatus {
    Mono { color: u32 },
    Mixed,
    Undefined { what: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    Param { key: String, value: String },
    Choose { label: String, values: Vec<Elem> },
    Oracle { family: Vec<Elem>, answer: Option<Elem> },
    Color { element: Elem, color: u32 },
    Node { label: String, status: NodeStatus },
    Note { text: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub kind: String,
    pub steps: Vec<TraceStep>,
    pub outcome: String,
}

fn render_list(values: &[Elem]) -> String {
    let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", body.join(","))
}

fn parse_list(text: &str) -> Result<Vec<Elem>, ConstructiveError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ConstructiveError::BadTrace(format!("expected a list, got {text:?}")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.parse()
                .map_err(|_| ConstructiveError::BadTrace(format!("bad element {tok:?}")))
        })
        .collect()
}

impl ConstructionTrace {
    pub fn new(kind: &str) -> Self {
        ConstructionTrace {
            kind: kind.to_string(),
            steps: Vec::new(),
            outcome: String::new(),
        }
    }

    pub fn push(&mut self, step: TraceStep) {
        self.steps.push(step);
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("trace v1 {}\n", self.kind);
        for step in &self.steps {
            let line = match step {
                TraceStep::Param { key, value } => format!("param {key} {value}"),
                TraceStep::Choose { label, values } => {
                    format!("choose {label} {}", render_list(values))
                }
                TraceStep::Oracle { family, answer } => format!(
                    "oracle {} -> {}",
                    render_list(family),
                    match answer {
                        Some(x) => x.to_string(),
                        None => "exhausted".into(),
                    }
                ),
                TraceStep::Color { element, color } => format!("color {element} {color}"),
                TraceStep::Node { label, status } => format!(
                    "node {label} {}",
                    match status {
                        NodeStatus::Mono { color } => format!("mono:{color}"),
                        NodeStatus::Mixed => "mixed".into(),
                        NodeStatus::Undefined { what } => format!("undefined:{what}"),
                    }
                ),
                TraceStep::Note { text } => format!("note {text}"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!("outcome {}\nend\n", self.outcome));
        out
    }

    pub fn parse(text: &str) -> Result<Self, ConstructiveError> {
        let bad = |m: String| ConstructiveError::BadTrace(m);
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty trace".into()))?;
        let kind = header
            .strip_prefix("trace v1 ")
            .ok_or_else(|| bad(format!("bad header {header:?}")))?
            .to_string();
        let mut trace = ConstructionTrace::new(&kind);
        let mut saw_end = false;
        for line in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if line == "end" {
                saw_end = true;
                break;
            }
            let (verb, rest) = line.split_once(' ').unwrap_or((line, ""));
            match verb {
                "param" => {
                    let (key, value) = rest
                        .split_once(' ')
                        .ok_or_else(|| bad(format!("bad param line {line:?}")))?;
                    trace.push(TraceStep::Param {
                        key: key.into(),
                        value: value.into(),
                    });
                }
                "choose" => {
                    let (label, list) = rest
                        .split_once(' ')
                        .ok_or_else(|| bad(format!("bad choose line {line:?}")))?;
                    trace.push(TraceStep::Choose {
                        label: label.into(),
                        values: parse_list(list)?,
                    });
                }
                "oracle" => {
                    let (list, answer) = rest
                        .split_once(" -> ")
                        .ok_or_else(|| bad(format!("bad oracle line {line:?}")))?;
                    trace.push(TraceStep::Oracle {
                        family: parse_list(list)?,
                        answer: match answer {
                            "exhausted" => None,
                            x => Some(x.parse().map_err(|_| bad(format!("bad answer {x:?}")))?),
                        },
                    });
                }
                "color" => {
                    let (e, c) = rest
                        .split_once(' ')
                        .ok_or_else(|| bad(format!("bad color line {line:?}")))?;
                    trace.push(TraceStep::Color {
                        element: e.parse().map_err(|_| bad(format!("bad element {e:?}")))?,
                        color: c.parse().map_err(|_| bad(format!("bad color {c:?}")))?,
                    });
                }
                "node" => {
                    let (label, status) = rest
                        .split_once(' ')
                        .ok_or_else(|| bad(format!("bad node line {line:?}")))?;
                    let status = if status == "mixed" {
                        NodeStatus::Mixed
                    } else if let Some(c) = status.strip_prefix("mono:") {
                        NodeStatus::Mono {
                            color: c.parse().map_err(|_| bad(format!("bad color {c:?}")))?,
                        }
                    } else if let Some(w) = status.strip_prefix("undefined:") {
                        NodeStatus::Undefined { what: w.into() }
                    } else {
                        return Err(bad(format!("bad node status {status:?}")));
                    };
                    trace.push(TraceStep::Node {
                        label: label.into(),
                        status,
                    });
                }
                "note" => trace.push(TraceStep::Note { text: rest.into() }),
                "outcome" => trace.outcome = rest.to_string(),
                _ => return Err(bad(format!("unknown verb in {line:?}"))),
            }
        }
        if !saw_end {
            return Err(bad("missing `end` line".into()));
        }
        Ok(trace)
    }

    /// Recorded oracle exchanges, in order.
    pub fn oracle_steps(&self) -> Vec<(Vec<Elem>, Option<Elem>)> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                TraceStep::Oracle { family, answer } => Some((family.clone(), *answer)),
                _ => None,
            })
            .collect()
    }

    /// Recorded `param` value.
    pub fn param(&self, key: &str) -> Option<&str> {
        self.steps.iter().find_map(|s| match s {
            TraceStep::Param { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    /// Lines where this trace and `other` first differ, for diagnostics.
    pub fn first_divergence(&self, other: &ConstructionTrace) -> Option<(usize, String, String)> {
        let a = self.to_text();
        let b = other.to_text();
        for (i, (la, lb)) in a.lines().zip(b.lines()).enumerate() {
            if la != lb {
                return Some((i, la.to_string(), lb.to_string()));
            }
        }
        let (la, lb) = (a.lines().count(), b.lines().count());
        if la != lb {
            return Some((la.min(lb), format!("{la} lines"), format!("{lb} lines")));
        }
        None
    }
}

/// Re-executes a recorded construction against the same inputs, feeding the
/// recorded oracle answers back in, and checks that the trace reproduces
/// byte for byte. Parameters (k, l, n, budgets) come from the trace itself.
pub fn replay(
    recorded: &ConstructionTrace,
    inputs: ReplayInputs<'_>,
) -> Result<(), ConstructiveError> {
    use super::oracle::ScriptedOracle;
    let mut oracle = ScriptedOracle::new(recorded.oracle_steps());
    let param = |key: &str| -> Result<u64, ConstructiveError> {
        recorded
            .param(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| ConstructiveError::BadTrace(format!("missing param {key}")))
    };
    let budget = crate::largeness::Budget::with_candidates(param("budget")?);
    let produced = match (recorded.kind.as_str(), inputs) {
        ("thick-syndetic", ReplayInputs::ThickSyndetic { g, subset }) => {
            super::thick_syndetic::thick_syndetic_constructor(
                g,
                subset,
                param("n")? as usize,
                param("k")? as u32,
                &mut oracle,
                param("max-witness")? as usize,
                &budget,
            )?
            .trace
        }
        ("bowen", ReplayInputs::Bowen { g, coloring }) => {
            super::bowen::bowen_thick_tree(
                g,
                coloring,
                param("k")? as u32,
                param("l")? as u32,
                &mut oracle,
                &budget,
            )?
            .trace
        }
        (kind, _) => {
            return Err(ConstructiveError::BadTrace(format!(
                "trace kind {kind:?} does not match the supplied inputs"
            )))
        }
    };
    if let Some((at, expected, got)) = recorded.first_divergence(&produced) {
        return Err(ConstructiveError::ReplayDiverged { at, expected, got });
    }
    Ok(())
}

/// Inputs a replay needs beyond the trace itself.
pub enum ReplayInputs<'a> {
    ThickSyndetic {
        g: &'a crate::algebra::GroundStructure,
        subset: &'a crate::mask::SubsetMask,
    },
    Bowen {
        g: &'a crate::algebra::GroundStructure,
        coloring: &'a crate::patterns::Coloring,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_text_round_trip() {
        let mut t = ConstructionTrace::new("bowen");
        t.push(TraceStep::Param {
            key: "k".into(),
            value: "2".into(),
        });
        t.push(TraceStep::Oracle {
            family: vec![0, 3],
            answer: Some(5),
        });
        t.push(TraceStep::Oracle {
            family: vec![7],
            answer: None,
        });
        t.push(TraceStep::Choose {
            label: "a1".into(),
            values: vec![5],
        });
        t.push(TraceStep::Color {
            element: 5,
            color: 1,
        });
        t.push(TraceStep::Node {
            label: "node1".into(),
            status: NodeStatus::Mono { color: 0 },
        });
        t.push(TraceStep::Node {
            label: "node2".into(),
            status: NodeStatus::Undefined { what: "kx+y".into() },
        });
        t.push(TraceStep::Note {
            text: "fallback scan".into(),
        });
        t.outcome = "success node1 x=2 y=2".into();
        let text = t.to_text();
        let back = ConstructionTrace::parse(&text).unwrap();
        assert_eq!(t, back);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.param("k"), Some("2"));
        assert_eq!(back.oracle_steps(), vec![(vec![0, 3], Some(5)), (vec![7], None)]);
    }

    #[test]
    fn tampered_oracle_answer_is_caught_on_replay() {
        use crate::constructive::{bowen_thick_tree, BruteForceOracle};
        use crate::largeness::Budget;
        use crate::patterns::Coloring;
        let g = crate::algebra::GroundStructure::nat_window(64);
        let coloring = Coloring::new(vec![0; 64], 2).unwrap();
        let mut oracle = BruteForceOracle;
        let run = bowen_thick_tree(&g, &coloring, 2, 2, &mut oracle, &Budget::exhaustive())
            .unwrap();
        assert!(run.result.is_ok());
        let mut tampered = run.trace.clone();
        for step in tampered.steps.iter_mut() {
            if let TraceStep::Oracle { answer, .. } = step {
                *answer = answer.map(|x| x + 7);
                break;
            }
        }
        let err = replay(
            &tampered,
            ReplayInputs::Bowen {
                g: &g,
                coloring: &coloring,
            },
        );
        assert!(
            matches!(err, Err(ConstructiveError::ReplayDiverged { .. })),
            "re-verification must reject the tampered answer: {err:?}"
        );
    }

    #[test]
    fn divergence_is_located() {
        let mut a = ConstructionTrace::new("bowen");
        a.push(TraceStep::Color { element: 1, color: 0 });
        a.outcome = "x".into();
        let mut b = a.clone();
        b.steps[0] = TraceStep::Color { element: 1, color: 1 };
        let (at, ea, eb) = a.first_divergence(&b).unwrap();
        assert_eq!(at, 1);
        assert_ne!(ea, eb);
        assert!(a.first_divergence(&a.clone()).is_none());
    }
}
