//! Plain-text CA programs: `var x 0 23.` declarations followed by rules
//! whose bodies may mention constraint atoms `|β|` directly.
//!
//! ```text
//! var x 0 23.
//! {am}.
//! lightOn :- switch, not am.
//! :- not am, |x<12|.
//! ```

use std::fmt;

use super::{CaProgram, NamedRule};
use crate::fd::FdError;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CaParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Constraint { line: usize, source: FdError },
    #[error("line {line}: constraint atom `{atom}` in a rule head")]
    ConstraintHead { line: usize, atom: String },
}

/// Split into `(line, statement)` pairs at periods outside `|…|`, dropping
/// `%` comments.
fn statements(text: &str) -> Result<Vec<(usize, String)>, CaParseError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 1;
    for (i, line) in text.lines().enumerate() {
        let mut in_bar = false;
        for c in line.chars() {
            if cur.trim().is_empty() && !c.is_whitespace() {
                start = i + 1;
            }
            match c {
                '%' if !in_bar => break,
                '|' => {
                    in_bar = !in_bar;
                    cur.push(c);
                }
                '.' if !in_bar => {
                    out.push((start, std::mem::take(&mut cur).trim().to_string()));
                }
                c => cur.push(c),
            }
        }
        if in_bar {
            return Err(CaParseError::Syntax {
                line: i + 1,
                msg: "unterminated constraint atom".into(),
            });
        }
        cur.push(' ');
    }
    if !cur.trim().is_empty() {
        return Err(CaParseError::Syntax {
            line: start,
            msg: "missing final period".into(),
        });
    }
    Ok(out)
}

fn atom(s: &str, line: usize) -> Result<String, CaParseError> {
    let s = s.trim();
    let ok = if s.starts_with('|') {
        s.len() > 2 && s.ends_with('|')
    } else {
        !s.is_empty()
            && !s.starts_with('-')
            && !s.contains(|c: char| c.is_whitespace() || "{}:,|".contains(c))
    };
    if ok {
        Ok(s.to_string())
    } else {
        Err(CaParseError::Syntax {
            line,
            msg: format!("bad atom `{s}`"),
        })
    }
}

/// Split a body at commas outside `|…|` and parentheses.
fn body_parts(s: &str) -> Vec<&str> {
    let (mut depth, mut in_bar, mut from) = (0i32, false, 0);
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '|' => in_bar = !in_bar,
            '(' if !in_bar => depth += 1,
            ')' if !in_bar => depth -= 1,
            ',' if !in_bar && depth == 0 => {
                out.push(&s[from..i]);
                from = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[from..]);
    out
}

fn rule(stmt: &str, line: usize) -> Result<NamedRule, CaParseError> {
    let (head, body) = match stmt.find(":-") {
        Some(i) => (stmt[..i].trim(), Some(&stmt[i + 2..])),
        None => (stmt, None),
    };
    let mut r = NamedRule::default();
    if let Some(inner) = head.strip_prefix('{').and_then(|h| h.strip_suffix('}')) {
        let a = atom(inner, line)?;
        r.negneg.push(a.clone());
        r.head = Some(a);
    } else if !head.is_empty() {
        r.head = Some(atom(head, line)?);
    }
    if let Some(body) = body {
        for lit in body_parts(body) {
            let lit = lit.trim();
            if let Some(a) = lit.strip_prefix("not not ") {
                r.negneg.push(atom(a, line)?);
            } else if let Some(a) = lit.strip_prefix("not ") {
                r.neg.push(atom(a, line)?);
            } else {
                r.pos.push(atom(lit, line)?);
            }
        }
    }
    if let Some(h) = r.head.as_ref().filter(|h| h.starts_with('|')) {
        return Err(CaParseError::ConstraintHead {
            line,
            atom: h.clone(),
        });
    }
    Ok(r)
}

fn var(stmt: &str, line: usize) -> Result<(String, i64, i64), CaParseError> {
    let bad = |msg: &str| CaParseError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let parts: Vec<&str> = stmt.split_whitespace().collect();
    let [_, name, lo, hi] = parts[..] else {
        return Err(bad("expected `var NAME LOW HIGH`"));
    };
    let lo: i64 = lo
        .parse()
        .map_err(|_| bad("lower bound is not an integer"))?;
    let hi: i64 = hi
        .parse()
        .map_err(|_| bad("upper bound is not an integer"))?;
    if lo > hi {
        return Err(bad("empty range"));
    }
    Ok((name.to_string(), lo, hi))
}

/// Parse a plain-text CA program.
pub fn parse_ca(text: &str) -> Result<CaProgram, CaParseError> {
    let mut vars = Vec::new();
    let mut rules = Vec::new();
    let mut lines = Vec::new();
    for (line, stmt) in statements(text)? {
        if stmt.starts_with("var ") {
            vars.push(var(&stmt, line)?);
        } else if stmt.is_empty() {
            return Err(CaParseError::Syntax {
                line,
                msg: "empty statement".into(),
            });
        } else {
            rules.push(rule(&stmt, line)?);
            lines.push(line);
        }
    }
    let decls = CaProgram::from_named(&vars, &[])
        .map_err(|source| CaParseError::Constraint { line: 0, source })?
        .vars;
    for (r, &line) in rules.iter().zip(&lines) {
        for beta in r
            .names()
            .filter_map(|n| n.strip_prefix('|').and_then(|n| n.strip_suffix('|')))
        {
            super::compile_beta(beta, &decls)
                .map_err(|source| CaParseError::Constraint { line, source })?;
        }
    }
    CaProgram::from_named(&vars, &rules)
        .map_err(|source| CaParseError::Constraint { line: 0, source })
}

impl fmt::Display for CaProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.vars {
            writeln!(f, "var {} {} {}.", d.name(), d.lower, d.upper)?;
        }
        let n = |a: &crate::asp::Atom| self.atom_name(*a).to_string();
        for r in &self.pi.rules {
            if let (Some(h), true, true, [nn]) =
                (r.head, r.pos.is_empty(), r.neg.is_empty(), &r.negneg[..])
            {
                if *nn == h {
                    writeln!(f, "{{{}}}.", n(&h))?;
                    continue;
                }
            }
            let mut body: Vec<String> = r.pos.iter().map(n).collect();
            body.extend(r.neg.iter().map(|a| format!("not {}", n(a))));
            body.extend(r.negneg.iter().map(|a| format!("not not {}", n(a))));
            let head = r.head.as_ref().map(n).unwrap_or_default();
            match (head.is_empty(), body.is_empty()) {
                (_, true) => writeln!(f, "{head}.")?,
                (true, false) => writeln!(f, ":- {}.", body.join(", "))?,
                (false, false) => writeln!(f, "{head} :- {}.", body.join(", "))?,
            }
        }
        Ok(())
    }
}
