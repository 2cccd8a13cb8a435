use std::collections::{BTreeSet, HashMap};

use super::{Elem, FMode, MembershipStructure, StructureBuilder, StructureError};
use crate::hfset::HfSet;

fn parse_err(line: usize, message: impl Into<String>) -> StructureError {
    StructureError::Parse {
        line,
        message: message.into(),
    }
}

struct Ids<'a> {
    index: &'a HashMap<String, Elem>,
}

impl Ids<'_> {
    fn get(&self, id: &str) -> Result<Elem, StructureError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| StructureError::DanglingId(id.to_owned()))
    }

    /// `{a, b, c}` or `{}`.
    fn set(&self, text: &str, line: usize) -> Result<BTreeSet<Elem>, StructureError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| parse_err(line, format!("expected `{{id, ...}}`, found `{text}`")))?;
        inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.get(s))
            .collect()
    }
}

fn split_arrow(rest: &str, line: usize) -> Result<(&str, &str), StructureError> {
    rest.split_once("->")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| parse_err(line, "expected `id -> value`"))
}

fn parse_cycles(text: &str, ids: &Ids, line: usize) -> Result<Vec<Vec<Elem>>, StructureError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_err(line, "expected `(` in cycle notation"))?;
        let close = body
            .find(')')
            .ok_or_else(|| parse_err(line, "unclosed cycle"))?;
        let cycle = body[..close]
            .split_whitespace()
            .map(|id| ids.get(id))
            .collect::<Result<Vec<_>, _>>()?;
        cycles.push(cycle);
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Parses and validates a structure file.
///
/// ```text
/// domain: a b c
/// edge: a b            # E(a, b)
/// hf: a = {{}}         # or a decimal Ackermann code
/// j: (a b)
/// f: a -> b            # element-valued f
/// fset: a -> {b, c}    # set-valued f
/// fmode: set           # mode of f when no entry is defined
/// injective: true      # request the injectivity check for fset
/// S: {a, b}
/// pred: G = {a}        # named predicate usable as a guard
/// ```
pub fn load_structure(text: &str) -> Result<MembershipStructure, StructureError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let names = match lines.next() {
        None => Vec::new(),
        Some((no, l)) => {
            let rest = l
                .strip_prefix("domain:")
                .ok_or_else(|| parse_err(no, "file must start with a `domain:` line"))?;
            rest.split_whitespace()
                .map(str::to_owned)
                .collect::<Vec<_>>()
        }
    };
    let mut index = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(StructureError::DuplicateId(name.clone()));
        }
    }
    let ids = Ids { index: &index };
    let mut b = StructureBuilder::new(names.iter().cloned());

    for (no, line) in lines {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, format!("expected `key: value`, found `{line}`")))?;
        let rest = rest.trim();
        b = match key.trim() {
            "domain" => return Err(parse_err(no, "duplicate `domain:` line")),
            "edge" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [y, x] = parts[..] else {
                    return Err(parse_err(no, "edge needs exactly two ids"));
                };
                b.edge(ids.get(y)?, ids.get(x)?)
            }
            "hf" => {
                let (id, value) = rest
                    .split_once('=')
                    .ok_or_else(|| parse_err(no, "expected `hf: id = set`"))?;
                let value = value.trim();
                let set = match value.parse::<u64>() {
                    Ok(code) => HfSet::from_code(code),
                    Err(_) => value
                        .parse::<HfSet>()
                        .map_err(|e| parse_err(no, e.to_string()))?,
                };
                b.hf(ids.get(id.trim())?, set)
            }
            "j" => b.j_cycles(&parse_cycles(rest, &ids, no)?),
            "f" => {
                let (x, y) = split_arrow(rest, no)?;
                b.f(ids.get(x)?, ids.get(y)?)
            }
            "fset" => {
                let (x, ys) = split_arrow(rest, no)?;
                b.fset(ids.get(x)?, ids.set(ys, no)?)
            }
            "fmode" => match rest {
                "element" => b.f_mode(FMode::Element),
                "set" => b.f_mode(FMode::SetValued),
                other => {
                    return Err(parse_err(
                        no,
                        format!("expected element or set, found `{other}`"),
                    ))
                }
            },
            "injective" => match rest {
                "true" => b.declare_injective(true),
                "false" => b.declare_injective(false),
                other => {
                    return Err(parse_err(
                        no,
                        format!("expected true or false, found `{other}`"),
                    ))
                }
            },
            "S" => b.code_set(ids.set(rest, no)?),
            "pred" => {
                let (name, set) = rest
                    .split_once('=')
                    .ok_or_else(|| parse_err(no, "expected `pred: name = {ids}`"))?;
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(parse_err(no, format!("bad predicate name `{name}`")));
                }
                b.predicate(name, ids.set(set, no)?)
            }
            other => return Err(parse_err(no, format!("unknown key `{other}`"))),
        };
    }
    b.build()
}
