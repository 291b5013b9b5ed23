//! Text formats for instances and solutions.
//!
//! ```text
//! DTSPMS 1
//! # family: metric
//! # seed: 7
//! n k c goal
//! <n+1 rows of pickup distances>
//!
//! <n+1 rows of delivery distances>
//! ```
//!
//! Entries are integers or `p/q`. Other `#` lines are comments.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{DistanceMatrix, Goal, Instance, InstanceMeta, LoadingPlan, SolutionTriple, Tour, Value};

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    /// Whitespace-separated tokens with 1-based columns.
    fn tokens(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices().chain(std::iter::once((self.text.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, t)| Line { no: i + 1, text: t })
        .filter(|l| !l.text.trim().is_empty() && !l.text.trim_start().starts_with('#'))
        .collect()
}

fn eof(text: &str, what: &str) -> Error {
    Error::Parse {
        line: text.lines().count() + 1,
        col: 1,
        msg: format!("unexpected end of input, expected {what}"),
    }
}

fn header(line: &Line<'_>, magic: &str) -> Result<()> {
    match line.tokens().as_slice() {
        [(_, m), (vc, v)] if *m == magic => {
            if *v == "1" {
                Ok(())
            } else {
                Err(line.err(*vc, format!("unsupported version {v}")))
            }
        }
        _ => Err(line.err(1, format!("expected header `{magic} 1`"))),
    }
}

fn number<T: std::str::FromStr>(line: &Line<'_>, col: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| line.err(col, format!("invalid {what} {tok:?}")))
}

fn value(line: &Line<'_>, col: usize, tok: &str) -> Result<Value> {
    number(line, col, tok, "distance")
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    header(it.next().ok_or_else(|| eof(text, "header"))?, "DTSPMS")?;
    let dims = it.next().ok_or_else(|| eof(text, "`n k c goal`"))?;
    let toks = dims.tokens();
    if toks.len() != 4 {
        return Err(dims.err(1, format!("expected `n k c goal`, found {} fields", toks.len())));
    }
    let n: usize = number(dims, toks[0].0, toks[0].1, "n")?;
    let k: usize = number(dims, toks[1].0, toks[1].1, "k")?;
    let c: usize = number(dims, toks[2].0, toks[2].1, "c")?;
    let goal: Goal = toks[3]
        .1
        .parse()
        .map_err(|_| dims.err(toks[3].0, format!("goal must be min or max, found {:?}", toks[3].1)))?;
    let mut mats = Vec::new();
    for name in ["pickup", "delivery"] {
        let mut data = Vec::with_capacity((n + 1) * (n + 1));
        for r in 0..=n {
            let line = it.next().ok_or_else(|| eof(text, &format!("{name} row {r}")))?;
            let toks = line.tokens();
            if toks.len() != n + 1 {
                let col = toks.get(n + 1).map_or(line.text.len() + 1, |t| t.0);
                return Err(line.err(col, format!("{name} row {r} has {} entries, expected {}", toks.len(), n + 1)));
            }
            for (col, tok) in toks {
                data.push(value(line, col, tok)?);
            }
        }
        mats.push(DistanceMatrix::new(n + 1, data)?);
    }
    if let Some(extra) = it.next() {
        return Err(extra.err(1, "trailing content after the delivery matrix"));
    }
    let mut meta = InstanceMeta::default();
    for (no, l) in text.lines().enumerate() {
        let body = l.trim_start().strip_prefix('#').map(str::trim);
        if let Some(f) = body.and_then(|b| b.strip_prefix("family:")) {
            meta.family = Some(f.trim().to_string());
        }
        if let Some(s) = body.and_then(|b| b.strip_prefix("seed:")) {
            let s = s.trim();
            meta.seed = Some(s.parse().map_err(|_| Error::Parse {
                line: no + 1,
                col: 1,
                msg: format!("invalid seed {s:?}"),
            })?);
        }
    }
    let dd = mats.pop().unwrap();
    let dp = mats.pop().unwrap();
    Ok(Instance::new(n, k, c, dp, dd, goal)?.with_meta(meta))
}

fn emit_matrix(out: &mut String, d: &DistanceMatrix) {
    for i in 0..d.size() {
        let row: Vec<String> = (0..d.size()).map(|j| d.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::from("DTSPMS 1\n");
    if let Some(f) = &inst.meta.family {
        writeln!(out, "# family: {f}").unwrap();
    }
    if let Some(s) = inst.meta.seed {
        writeln!(out, "# seed: {s}").unwrap();
    }
    writeln!(out, "{} {} {} {}", inst.n, inst.k, inst.c, inst.goal).unwrap();
    emit_matrix(&mut out, &inst.dp);
    out.push('\n');
    emit_matrix(&mut out, &inst.dd);
    out
}

fn keyed<'a>(line: &'a Line<'a>, key: &str) -> Result<&'a str> {
    let t = line.text.trim_start();
    t.strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| line.err(1, format!("expected `{key}:`")))
}

fn tour(line: &Line<'_>, key: &str) -> Result<Tour> {
    keyed(line, key)?;
    let toks = line.tokens();
    let mut seq = Vec::new();
    for &(col, tok) in &toks[1..] {
        seq.push(number(line, col, tok, "vertex")?);
    }
    Tour::new(seq).map_err(|e| line.err(1, e.to_string()))
}

pub fn parse_solution(text: &str) -> Result<SolutionTriple> {
    let lines = content_lines(text);
    let mut it = lines.iter();
    header(it.next().ok_or_else(|| eof(text, "header"))?, "SOLUTION")?;
    let pl = it.next().ok_or_else(|| eof(text, "pickup line"))?;
    let pickup = tour(pl, "pickup")?;
    let dl = it.next().ok_or_else(|| eof(text, "delivery line"))?;
    let delivery = tour(dl, "delivery")?;
    let line = it.next().ok_or_else(|| eof(text, "plan line"))?;
    let body = keyed(line, "plan")?;
    let offset = line.text.len() - body.len();
    let mut rows = Vec::new();
    let mut pos = offset;
    for part in body.split(';') {
        let col = pos + 1;
        pos += part.len() + 1;
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (label, items) = part
            .split_once('=')
            .ok_or_else(|| line.err(col, format!("expected `rN= items`, found {part:?}")))?;
        if label.trim() != format!("r{}", rows.len() + 1) {
            return Err(line.err(col, format!("expected row label r{}, found {:?}", rows.len() + 1, label.trim())));
        }
        let mut row = Vec::new();
        for tok in items.split_whitespace() {
            row.push(number(line, col, tok, "item")?);
        }
        rows.push(row);
    }
    let vl = it.next().ok_or_else(|| eof(text, "value line"))?;
    let v = keyed(vl, "value")?.trim();
    let value = value(vl, vl.text.len() - v.len() + 1, v)?;
    if let Some(extra) = it.next() {
        return Err(extra.err(1, "trailing content after the value"));
    }
    Ok(SolutionTriple {
        plan: LoadingPlan::new(rows),
        pickup,
        delivery,
        value,
    })
}

pub fn emit_solution(s: &SolutionTriple) -> String {
    let rows: Vec<String> = s
        .plan
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let items: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            format!("r{}= {}", r + 1, items.join(" ")).trim_end().to_string()
        })
        .collect();
    format!(
        "SOLUTION 1\npickup: {}\ndelivery: {}\nplan: {}\nvalue: {}\n",
        s.pickup,
        s.delivery,
        rows.join(" ; "),
        s.value
    )
}
