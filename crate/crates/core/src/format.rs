//! Line-oriented text format for function families.
//!
//! ```text
//! # comments run to end of line
//! family deutsch
//! x_bits 1
//! v_bits 1
//! solution_bits 1
//! k 00 : 0 0 ; solution 0
//! k 01 : 0 1 ; solution 1
//! meta h=01            # optional, attaches to the member above
//! ```
//!
//! Values are listed for `x` in increasing binary order.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::{validate_family, FamilyKind, FunctionFamily, MemberMeta, MemberSpec, OracleFunction};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn tokens(line: &str) -> Vec<String> {
    let body = line.split('#').next().unwrap_or("");
    body.replace(':', " : ")
        .replace(';', " ; ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn header_value(lines: &mut impl Iterator<Item = (usize, Vec<String>)>, key: &str) -> Result<(usize, String)> {
    let (line, toks) = lines
        .next()
        .ok_or_else(|| parse_error(0, format!("missing `{key}` line")))?;
    match toks.as_slice() {
        [k, v] if k == key => Ok((line, v.clone())),
        _ => Err(parse_error(line, format!("expected `{key} <value>`"))),
    }
}

fn header_int(lines: &mut impl Iterator<Item = (usize, Vec<String>)>, key: &str) -> Result<usize> {
    let (line, v) = header_value(lines, key)?;
    v.parse()
        .map_err(|_| parse_error(line, format!("`{key}` needs a non-negative integer, got {v:?}")))
}

fn parse_bits(line: usize, s: &str, width: usize, what: &str) -> Result<Bits> {
    let b: Bits = s
        .parse()
        .map_err(|_| parse_error(line, format!("{what} {s:?} is not a bit string")))?;
    if b.width() != width {
        return Err(parse_error(line, format!("{what} {s} is not {width} bits wide")));
    }
    Ok(b)
}

pub fn parse_family(text: &str) -> Result<FunctionFamily> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());

    let (_, name) = header_value(&mut lines, "family")?;
    let x_bits = header_int(&mut lines, "x_bits")?;
    let v_bits = header_int(&mut lines, "v_bits")?;
    let solution_bits = header_int(&mut lines, "solution_bits")?;
    if x_bits > 16 {
        return Err(parse_error(0, format!("x_bits = {x_bits} is too large")));
    }
    let rows = 1usize << x_bits;

    let mut members: Vec<(usize, MemberSpec)> = Vec::new();
    let mut first_line: HashMap<Bits, usize> = HashMap::new();
    for (line, toks) in lines {
        match toks[0].as_str() {
            "k" => {
                let colon = toks
                    .iter()
                    .position(|t| t == ":")
                    .ok_or_else(|| parse_error(line, "expected `:` after the k label"))?;
                if colon != 2 {
                    return Err(parse_error(line, "expected `k <bits> : ...`"));
                }
                let k: Bits = toks[1]
                    .parse()
                    .map_err(|_| parse_error(line, format!("k label {:?} is not a bit string", toks[1])))?;
                if let Some(prev) = first_line.insert(k, line) {
                    return Err(parse_error(line, format!("duplicate k {k} (first on line {prev})")));
                }
                let semi = toks.iter().position(|t| t == ";");
                let values_end = semi.unwrap_or(toks.len());
                let values = &toks[colon + 1..values_end];
                if values.len() != rows {
                    return Err(parse_error(
                        line,
                        format!("k {k} lists {} values, expected {rows}", values.len()),
                    ));
                }
                let table = values
                    .iter()
                    .map(|v| parse_bits(line, v, v_bits, "value"))
                    .collect::<Result<Vec<_>>>()?;
                let solution = match semi.map(|s| &toks[s + 1..]) {
                    Some([kw, s]) if kw == "solution" => parse_bits(line, s, solution_bits, "solution")?,
                    _ => return Err(parse_error(line, format!("k {k} has no `; solution <bits>`"))),
                };
                members.push((
                    line,
                    MemberSpec { function: OracleFunction::new(k, table), solution, meta: None },
                ));
            }
            "meta" => {
                let (_, last) = members
                    .last_mut()
                    .ok_or_else(|| parse_error(line, "`meta` before any member"))?;
                if toks.len() != 2 {
                    return Err(parse_error(line, "expected `meta h=<bits>` or `meta a=<bits>`"));
                }
                let (key, value) = toks[1]
                    .split_once('=')
                    .ok_or_else(|| parse_error(line, "expected `meta h=<bits>` or `meta a=<bits>`"))?;
                let b = parse_bits(line, value, x_bits, "metadata")?;
                last.meta = Some(match key {
                    "h" => MemberMeta::Period(b),
                    "a" => MemberMeta::Hidden(b),
                    _ => return Err(parse_error(line, format!("unknown metadata key {key:?}"))),
                });
            }
            other => return Err(parse_error(line, format!("unexpected token {other:?}"))),
        }
    }
    if members.is_empty() {
        return Err(parse_error(0, "family has no members"));
    }

    let lines_by_k: HashMap<String, usize> =
        members.iter().map(|(l, m)| (m.function.k_label().to_string(), *l)).collect();
    let family = FunctionFamily::from_parts(
        &name,
        FamilyKind::from_name(&name),
        x_bits,
        v_bits,
        solution_bits,
        members.into_iter().map(|(_, m)| m).collect(),
    );
    if let Some(v) = validate_family(&family).into_iter().next() {
        let line = v.member.as_ref().and_then(|k| lines_by_k.get(k)).copied().unwrap_or(0);
        return Err(parse_error(line, v.to_string()));
    }
    Ok(family)
}

pub fn serialize_family(family: &FunctionFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "family {}", family.name());
    let _ = writeln!(out, "x_bits {}", family.x_bits());
    let _ = writeln!(out, "v_bits {}", family.v_bits());
    let _ = writeln!(out, "solution_bits {}", family.solution_bits());
    for (k, member) in family.members().iter().enumerate() {
        let _ = write!(out, "k {} :", member.k_label());
        for v in member.table() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " ; solution {}", family.solution(k));
        match family.meta(k) {
            Some(MemberMeta::Period(h)) => {
                let _ = writeln!(out, "meta h={h}");
            }
            Some(MemberMeta::Hidden(a)) => {
                let _ = writeln!(out, "meta a={a}");
            }
            None => {}
        }
    }
    out
}
