//! Textual and JSON forms of schedules.
//!
//! Text: one statement per line (`;` also separates entries on import),
//!
//! ```text
//! S[i] -> [i, 0]
//! T[i,j] -> [i+j, i+1]
//! ```
//!
//! JSON: per statement, one row `[iter coeffs, param coeffs, constant]` per
//! schedule dimension.

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::schedule::{Schedule, ScheduleError};
use crate::scop::{AffineExpr, Scop};

fn format_expr(e: &AffineExpr, vars: &[&str]) -> String {
    let mut out = String::new();
    for (&c, v) in e.coeffs.iter().zip(vars) {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        out.push_str(sign);
        if c.unsigned_abs() != 1 {
            out.push_str(&format!("{}*", c.unsigned_abs()));
        }
        out.push_str(v);
    }
    if e.constant != 0 || out.is_empty() {
        if e.constant >= 0 && !out.is_empty() {
            out.push('+');
        }
        out.push_str(&e.constant.to_string());
    }
    out
}

/// One line per statement, in the order of `scop`.
pub fn export_schedule(schedule: &Schedule, scop: &Scop) -> Result<String, EvalError> {
    let rows = schedule.rows_for(scop)?;
    let mut out = String::new();
    for (s, dims) in scop.statements.iter().zip(rows) {
        let vars: Vec<&str> = s.iters.iter().chain(&scop.params).map(String::as_str).collect();
        let exprs: Vec<String> = dims.iter().map(|e| format_expr(e, &vars)).collect();
        out.push_str(&format!("{}[{}] -> [{}]\n", s.name, s.iters.join(","), exprs.join(", ")));
    }
    Ok(out)
}

fn parse_error(msg: impl Into<String>) -> EvalError {
    EvalError::Schedule(ScheduleError::Parse(msg.into()))
}

fn parse_expr(text: &str, vars: &[String]) -> Result<AffineExpr, EvalError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_error("empty expression"));
    }
    let mut e = AffineExpr::zero(vars.len());
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if rest.len() == compact.len() => (false, rest),
            _ => return Err(parse_error(format!("expected `+` or `-` in `{text}`"))),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (coeff, var) = match term.split_once('*') {
            Some((c, v)) => (c, Some(v)),
            None if term.starts_with(|c: char| c.is_ascii_digit()) => (term, None),
            None => ("1", Some(term)),
        };
        let mut c: i64 = coeff.parse().map_err(|_| parse_error(format!("bad coefficient `{coeff}` in `{text}`")))?;
        if negative {
            c = -c;
        }
        match var {
            None => e.constant = e.constant.checked_add(c).ok_or(EvalError::ArithmeticOverflow)?,
            Some(v) => {
                let k = vars
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| parse_error(format!("unknown symbol `{v}` in `{text}`")))?;
                e.coeffs[k] = e.coeffs[k].checked_add(c).ok_or(EvalError::ArithmeticOverflow)?;
            }
        }
    }
    Ok(e)
}

fn split_list(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(str::trim).collect()
    }
}

/// Parses the text form against `scop`.
pub fn import_schedule(text: &str, scop: &Scop) -> Result<Schedule, EvalError> {
    let mut found: Vec<Option<Vec<AffineExpr>>> = vec![None; scop.statements.len()];
    for entry in text.split(['\n', ';']).map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (lhs, rhs) = entry.split_once("->").ok_or_else(|| parse_error(format!("missing `->` in `{entry}`")))?;
        let lhs = lhs.trim();
        let open = lhs.find('[').ok_or_else(|| parse_error(format!("missing `[` in `{lhs}`")))?;
        let name = lhs[..open].trim();
        let iters = lhs[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| parse_error(format!("missing `]` in `{lhs}`")))?;
        let si = scop.statement_index(name).ok_or_else(|| ScheduleError::UnknownStatement(name.to_string()))?;
        let s = &scop.statements[si];
        if split_list(iters) != s.iters.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(parse_error(format!("statement `{name}` has iterators [{}]", s.iters.join(","))));
        }
        let body = rhs
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| parse_error(format!("expected `[...]` in `{entry}`")))?;
        let vars: Vec<String> = s.iters.iter().chain(&scop.params).cloned().collect();
        let dims = split_list(body).into_iter().map(|e| parse_expr(e, &vars)).collect::<Result<Vec<_>, _>>()?;
        if found[si].replace(dims).is_some() {
            return Err(parse_error(format!("statement `{name}` appears twice")));
        }
    }
    let rows = found
        .into_iter()
        .zip(&scop.statements)
        .map(|(r, s)| r.ok_or_else(|| parse_error(format!("statement `{}` is missing", s.name))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Schedule::from_rows(scop, rows)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleStatementFile {
    pub name: String,
    pub iters: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub params: Vec<String>,
    pub statements: Vec<ScheduleStatementFile>,
}

pub fn export_schedule_json(schedule: &Schedule, scop: &Scop) -> Result<String, EvalError> {
    let rows = schedule.rows_for(scop)?;
    let file = ScheduleFile {
        params: scop.params.clone(),
        statements: scop
            .statements
            .iter()
            .zip(rows)
            .map(|(s, dims)| ScheduleStatementFile {
                name: s.name.clone(),
                iters: s.iters.clone(),
                rows: dims
                    .iter()
                    .map(|e| e.coeffs.iter().copied().chain([e.constant]).collect())
                    .collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file).expect("schedule files always serialize") + "\n")
}

pub fn import_schedule_json(text: &str, scop: &Scop) -> Result<Schedule, EvalError> {
    let file: ScheduleFile = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    if file.params != scop.params {
        return Err(parse_error("parameter list does not match the SCoP"));
    }
    let mut found: Vec<Option<Vec<AffineExpr>>> = vec![None; scop.statements.len()];
    for st in file.statements {
        let si = scop.statement_index(&st.name).ok_or_else(|| ScheduleError::UnknownStatement(st.name.clone()))?;
        if st.iters != scop.statements[si].iters {
            return Err(parse_error(format!("iterators of `{}` do not match the SCoP", st.name)));
        }
        let dims = st
            .rows
            .into_iter()
            .map(|mut r| {
                let c = r.pop().ok_or_else(|| parse_error(format!("empty row for `{}`", st.name)))?;
                Ok(AffineExpr::new(r, c))
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        if found[si].replace(dims).is_some() {
            return Err(parse_error(format!("statement `{}` appears twice", st.name)));
        }
    }
    let rows = found
        .into_iter()
        .zip(&scop.statements)
        .map(|(r, s)| r.ok_or_else(|| parse_error(format!("statement `{}` is missing", s.name))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Schedule::from_rows(scop, rows)?)
}

/// JSON when the text starts with `{`, the text form otherwise.
pub fn parse_schedule_any(text: &str, scop: &Scop) -> Result<Schedule, EvalError> {
    if text.trim_start().starts_with('{') {
        import_schedule_json(text, scop)
    } else {
        import_schedule(text, scop)
    }
}
