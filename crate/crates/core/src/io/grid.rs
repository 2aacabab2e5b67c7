//! The `sl2tiling v1` text format.
//!
//! ```text
//! sl2tiling v1
//! ring: Z/36
//! kind: periodic
//! rows: 4
//! cols: 4
//!
//! 3 2 33 34
//! 4 3 32 33
//! 9 16 3 2
//! 14 9 4 3
//! ```
//!
//! Header keys: `ring` (`Z`, `Z/<N>` or `Z[a]`), `kind` (`periodic`, `window`
//! or `patched`), `rows`, `cols`, optional `origin: <i0> <j0>`, and for
//! patched documents `lattice: <u> <v> <m> <t>` plus `params: formal` or
//! `params: default=<v>,<i>:<j>=<v>,...`. A patched body lists the base rule
//! as a block whose entries depend only on `(j - i) mod 4`.
//!
//! Entry tokens are `SIGN? (INT | INT*VAR | VAR)` with `VAR = a<k>`, `k >= 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algebra::{Matrix, Monomial, Polynomial, RingSpec, RingValue};
use crate::tiling::{
    NumericParams, ParameterAssignment, Sublattice, TilingBody, TilingModel, Window,
};

use super::IoError;

/// A diagnostic with 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Periodic,
    Window,
    Patched,
}

impl GridKind {
    fn name(self) -> &'static str {
        match self {
            GridKind::Periodic => "periodic",
            GridKind::Window => "window",
            GridKind::Patched => "patched",
        }
    }
}

/// A parsed grid file. `entries` holds the block, window or base rule block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDocument {
    pub ring: RingSpec,
    pub kind: GridKind,
    pub origin: Option<(i64, i64)>,
    pub lattice: Option<Sublattice>,
    pub params: Option<ParameterAssignment>,
    pub entries: Matrix,
}

/// What a document describes.
#[derive(Clone, Debug)]
pub enum Parsed {
    Model(TilingModel),
    Window(Window),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WriteOptions {
    /// Print residues above `N/2` as negative numbers.
    pub signed: bool,
}

impl GridDocument {
    /// Describes a tiling by one period (rule-based tilings become a 4x4
    /// periodic block).
    pub fn from_model(t: &TilingModel) -> GridDocument {
        match t.body() {
            TilingBody::RuleBased(_) => GridDocument {
                ring: t.ring(),
                kind: GridKind::Periodic,
                origin: None,
                lattice: None,
                params: None,
                entries: t.extract_window(0, 0, 4, 4).matrix,
            },
            TilingBody::Periodic(b) => GridDocument {
                ring: t.ring(),
                kind: GridKind::Periodic,
                origin: None,
                lattice: None,
                params: None,
                entries: b.clone(),
            },
            TilingBody::Patched(p) => {
                let ring = t.ring();
                let base = p.base().clone();
                let entries = Matrix::from_fn(4, 4, |i, j| {
                    RingValue::from_int(ring, base[(j + 4 - i) % 4].clone())
                })
                .unwrap();
                GridDocument {
                    ring,
                    kind: GridKind::Patched,
                    origin: None,
                    lattice: Some(p.lattice()),
                    params: Some(p.params().clone()),
                    entries,
                }
            }
        }
    }

    pub fn from_window(w: &Window) -> GridDocument {
        GridDocument {
            ring: w.ring(),
            kind: GridKind::Window,
            origin: Some(w.origin),
            lattice: None,
            params: None,
            entries: w.matrix.clone(),
        }
    }

    pub fn into_parsed(self) -> Result<Parsed, IoError> {
        match self.kind {
            GridKind::Window => Ok(Parsed::Window(self.to_window())),
            _ => Ok(Parsed::Model(self.to_model()?)),
        }
    }

    pub fn to_window(&self) -> Window {
        Window::new(self.origin.unwrap_or((0, 0)), self.entries.clone())
    }

    pub fn to_model(&self) -> Result<TilingModel, IoError> {
        match self.kind {
            GridKind::Window => Err(IoError::Invalid(
                "a window document describes a finite block, not a tiling".into(),
            )),
            GridKind::Periodic => Ok(TilingModel::periodic(self.entries.clone())),
            GridKind::Patched => {
                let table = rule_table(&self.entries)?;
                let lattice = self.lattice.expect("patched documents carry a lattice");
                let params = self.params.clone().expect("patched documents carry params");
                Ok(TilingModel::patched(table, lattice, params)?)
            }
        }
    }
}

/// Reads the base rule off a block with entries depending only on `(j - i) mod 4`.
fn rule_table(m: &Matrix) -> Result<[i64; 4], IoError> {
    let mut table: [Option<i64>; 4] = [None; 4];
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let d = (j + 4 * m.rows() - i) % 4;
            let v = m
                .get(i, j)
                .as_constant()
                .and_then(|c| i64::try_from(c).ok())
                .ok_or_else(|| {
                    IoError::Invalid(format!("base entry ({i}, {j}) is not an integer"))
                })?;
            match table[d] {
                None => table[d] = Some(v),
                Some(prev) if prev != v => {
                    return Err(IoError::Invalid(format!(
                        "base entry ({i}, {j}) = {v} breaks the rule form (expected {prev})"
                    )))
                }
                _ => {}
            }
        }
    }
    let mut out = [0; 4];
    for (d, v) in table.iter().enumerate() {
        out[d] =
            v.ok_or_else(|| IoError::Invalid(format!("base block does not determine offset {d}")))?;
    }
    Ok(out)
}

fn split_tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                out.push((s, &line[s..k]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

fn parse_int<T: FromStr>(s: &str, line: usize, col: usize, what: &str) -> Result<T, ParseError> {
    match s.parse() {
        Ok(v) => Ok(v),
        Err(_) => err(line, col, format!("expected {what}, found `{s}`")),
    }
}

fn parse_var(s: &str, line: usize, col: usize) -> Result<u64, ParseError> {
    let digits = s.strip_prefix('a').unwrap_or("");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return err(line, col, format!("bad variable `{s}`"));
    }
    match digits.parse::<u64>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => err(
            line,
            col,
            format!("variable index in `{s}` must be a positive integer"),
        ),
    }
}

/// Parses one entry token into `ring`.
pub fn parse_token(
    tok: &str,
    ring: RingSpec,
    line: usize,
    col: usize,
) -> Result<RingValue, ParseError> {
    let (neg, body) = match tok.as_bytes().first() {
        Some(b'-') => (true, &tok[1..]),
        Some(b'+') => (false, &tok[1..]),
        _ => (false, tok),
    };
    if body.is_empty() {
        return err(line, col, format!("empty token `{tok}`"));
    }
    let (coeff, var) = if let Some((c, v)) = body.split_once('*') {
        if c.is_empty() || !c.bytes().all(|b| b.is_ascii_digit()) {
            return err(line, col, format!("bad coefficient in `{tok}`"));
        }
        (BigInt::from_str(c).unwrap(), Some(parse_var(v, line, col)?))
    } else if body.starts_with('a') {
        (BigInt::one(), Some(parse_var(body, line, col)?))
    } else {
        if !body.bytes().all(|b| b.is_ascii_digit()) {
            return err(line, col, format!("bad token `{tok}`"));
        }
        (BigInt::from_str(body).unwrap(), None)
    };
    let coeff = if neg { -coeff } else { coeff };
    match (ring, var) {
        (RingSpec::Polynomial, Some(v)) => {
            Ok(RingValue::Poly(Polynomial::term(coeff, Monomial::var(v))))
        }
        (_, Some(_)) => err(line, col, format!("variable in `{tok}` needs ring Z[a]")),
        (RingSpec::Modular(n), None) => {
            if coeff.abs() >= BigInt::from(n.get()) {
                return err(
                    line,
                    col,
                    format!("residue {coeff} out of range for Z/{}", n.get()),
                );
            }
            Ok(RingValue::from_int(ring, coeff))
        }
        (_, None) => Ok(RingValue::from_int(ring, coeff)),
    }
}

fn parse_ring(v: &str, line: usize, col: usize) -> Result<RingSpec, ParseError> {
    match v {
        "Z" => Ok(RingSpec::Integers),
        "Z[a]" => Ok(RingSpec::Polynomial),
        _ => {
            let Some(n) = v.strip_prefix("Z/") else {
                return err(line, col, format!("unknown ring `{v}`"));
            };
            let n: u64 = parse_int(n, line, col + 2, "a modulus")?;
            RingSpec::modular(n).or_else(|e| err(line, col, e.to_string()))
        }
    }
}

fn parse_params(v: &str, line: usize, col: usize) -> Result<ParameterAssignment, ParseError> {
    if v == "formal" {
        return Ok(ParameterAssignment::Formal);
    }
    let mut default = None;
    let mut overrides = Vec::new();
    let mut offset = 0;
    for item in v.split(',') {
        let c = col + offset;
        offset += item.len() + 1;
        let item = item.trim();
        let Some((key, val)) = item.split_once('=') else {
            return err(line, c, format!("expected `key=value`, found `{item}`"));
        };
        let val: BigInt = parse_int(val.trim(), line, c, "an integer value")?;
        if key.trim() == "default" {
            if default.replace(val).is_some() {
                return err(line, c, "duplicate default");
            }
            continue;
        }
        let Some((i, j)) = key.trim().split_once(':') else {
            return err(line, c, format!("expected `i:j` position, found `{key}`"));
        };
        let i: i64 = parse_int(i, line, c, "a row index")?;
        let j: i64 = parse_int(j, line, c, "a column index")?;
        overrides.push(((i, j), val));
    }
    let Some(default) = default else {
        return err(line, col, "numeric params need `default=<value>`");
    };
    let n = overrides.len();
    let params =
        NumericParams::new(default, overrides).or_else(|e| err(line, col, e.to_string()))?;
    if params.overrides().len() != n {
        return err(line, col, "duplicate parameter position");
    }
    Ok(ParameterAssignment::Numeric(params))
}

#[derive(Default)]
struct Header {
    ring: Option<RingSpec>,
    kind: Option<GridKind>,
    rows: Option<usize>,
    cols: Option<usize>,
    origin: Option<(i64, i64)>,
    lattice: Option<Sublattice>,
    params: Option<ParameterAssignment>,
}

fn numbers(v: &str, k: usize, line: usize, col: usize, what: &str) -> Result<Vec<i64>, ParseError> {
    let parts = split_tokens(v);
    if parts.len() != k {
        return err(line, col, format!("{what} needs {k} integers"));
    }
    parts
        .into_iter()
        .map(|(c, s)| parse_int(s, line, col + c, "an integer"))
        .collect()
}

pub fn parse_grid(text: &str) -> Result<GridDocument, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first().map(|l| l.trim_end()) != Some("sl2tiling v1") {
        return err(1, 1, "expected `sl2tiling v1`");
    }
    let mut h = Header::default();
    let mut k = 1;
    while k < lines.len() && !lines[k].trim().is_empty() {
        let line = lines[k];
        let ln = k + 1;
        let Some((key, value)) = line.split_once(':') else {
            return err(ln, 1, format!("expected `key: value`, found `{line}`"));
        };
        let vcol = key.len() + 2 + (value.len() - value.trim_start().len());
        let value = value.trim();
        let dup = |present: bool| {
            if present {
                err(ln, 1, format!("duplicate `{key}`"))
            } else {
                Ok(())
            }
        };
        match key.trim() {
            "ring" => {
                dup(h.ring.is_some())?;
                h.ring = Some(parse_ring(value, ln, vcol)?);
            }
            "kind" => {
                dup(h.kind.is_some())?;
                h.kind = Some(match value {
                    "periodic" => GridKind::Periodic,
                    "window" => GridKind::Window,
                    "patched" => GridKind::Patched,
                    _ => return err(ln, vcol, format!("unknown kind `{value}`")),
                });
            }
            "rows" | "cols" => {
                let n: usize = parse_int(value, ln, vcol, "a positive size")?;
                if n == 0 {
                    return err(ln, vcol, "size must be positive");
                }
                let slot = if key.trim() == "rows" {
                    &mut h.rows
                } else {
                    &mut h.cols
                };
                dup(slot.is_some())?;
                *slot = Some(n);
            }
            "origin" => {
                dup(h.origin.is_some())?;
                let v = numbers(value, 2, ln, vcol, "origin")?;
                h.origin = Some((v[0], v[1]));
            }
            "lattice" => {
                dup(h.lattice.is_some())?;
                let v = numbers(value, 4, ln, vcol, "lattice")?;
                h.lattice = Some(
                    Sublattice::new(v[0], v[1], v[2], v[3])
                        .or_else(|e| err(ln, vcol, e.to_string()))?,
                );
            }
            "params" => {
                dup(h.params.is_some())?;
                h.params = Some(parse_params(value, ln, vcol)?);
            }
            other => return err(ln, 1, format!("unknown header `{other}`")),
        }
        k += 1;
    }
    let header_end = k + 1;
    let missing = |what: &str| err(header_end, 1, format!("missing `{what}` header"));
    let Some(ring) = h.ring else {
        return missing("ring");
    };
    let Some(kind) = h.kind else {
        return missing("kind");
    };
    let Some(rows) = h.rows else {
        return missing("rows");
    };
    let Some(cols) = h.cols else {
        return missing("cols");
    };
    if kind == GridKind::Patched {
        if h.lattice.is_none() {
            return missing("lattice");
        }
        let expected = match h.params {
            None => return missing("params"),
            Some(ParameterAssignment::Formal) => RingSpec::Polynomial,
            Some(ParameterAssignment::Numeric(_)) => RingSpec::Integers,
        };
        if ring != expected {
            return err(
                header_end,
                1,
                format!("patched document with these params needs ring {expected}"),
            );
        }
    } else if h.lattice.is_some() || h.params.is_some() {
        return err(
            header_end,
            1,
            "lattice and params belong to patched documents",
        );
    }

    // Skip the blank separator line(s).
    while k < lines.len() && lines[k].trim().is_empty() {
        k += 1;
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let ln = k + r + 1;
        let Some(line) = lines.get(k + r) else {
            return err(ln, 1, format!("expected {rows} rows, found {r}"));
        };
        let toks = split_tokens(line);
        if toks.len() != cols {
            let col = toks.get(cols).map_or(line.len() + 1, |t| t.0 + 1);
            return err(
                ln,
                col,
                format!("expected {cols} entries, found {}", toks.len()),
            );
        }
        for (c, t) in toks {
            entries.push(parse_token(t, ring, ln, c + 1)?);
        }
    }
    if let Some(extra) = lines[(k + rows).min(lines.len())..]
        .iter()
        .position(|l| !l.trim().is_empty())
    {
        return err(
            k + rows + extra + 1,
            1,
            format!("unexpected data after {rows} rows"),
        );
    }
    let entries = Matrix::new(rows, cols, entries).expect("entries parsed into one ring");
    let doc = GridDocument {
        ring,
        kind,
        origin: h.origin,
        lattice: h.lattice,
        params: h.params,
        entries,
    };
    if kind == GridKind::Patched {
        if let Err(e) = doc.to_model() {
            return err(k + 1, 1, e.to_string());
        }
    }
    Ok(doc)
}

/// Canonical token for one entry, or `None` if the value needs more than one term.
pub fn format_token(v: &RingValue, signed: bool) -> Option<String> {
    match v {
        RingValue::Int(x) => Some(x.to_string()),
        RingValue::Mod(r) if signed => Some(r.signed().to_string()),
        RingValue::Mod(r) => Some(r.value().to_string()),
        RingValue::Poly(p) => {
            if let Some(c) = p.as_constant() {
                return Some(c.to_string());
            }
            if p.num_terms() != 1 {
                return None;
            }
            let (m, c) = p.leading_term().unwrap();
            let [(var, 1)] = m.factors() else {
                return None;
            };
            Some(if c.is_one() {
                format!("a{var}")
            } else if *c == -BigInt::one() {
                format!("-a{var}")
            } else if c.is_negative() {
                format!("-{}*a{var}", c.abs())
            } else {
                format!("{c}*a{var}")
            })
        }
    }
}

/// Parses a parameter list in the `params:` header syntax.
pub fn parse_assignment(v: &str) -> Result<ParameterAssignment, ParseError> {
    parse_params(v.trim(), 1, 1)
}

fn format_params(p: &ParameterAssignment) -> String {
    match p {
        ParameterAssignment::Formal => "formal".into(),
        ParameterAssignment::Numeric(n) => {
            let mut parts = vec![format!("default={}", n.default_value())];
            let sorted: BTreeMap<_, _> = n.overrides().iter().collect();
            parts.extend(sorted.into_iter().map(|((i, j), v)| format!("{i}:{j}={v}")));
            parts.join(",")
        }
    }
}

pub fn write_grid(doc: &GridDocument, opts: WriteOptions) -> Result<String, IoError> {
    use fmt::Write;
    let m = &doc.entries;
    let mut out = String::new();
    writeln!(out, "sl2tiling v1").unwrap();
    writeln!(out, "ring: {}", doc.ring).unwrap();
    writeln!(out, "kind: {}", doc.kind.name()).unwrap();
    writeln!(out, "rows: {}", m.rows()).unwrap();
    writeln!(out, "cols: {}", m.cols()).unwrap();
    if let Some((i, j)) = doc.origin {
        writeln!(out, "origin: {i} {j}").unwrap();
    }
    if let Some(l) = doc.lattice {
        writeln!(out, "lattice: {} {} {} {}", l.u, l.v, l.m, l.t).unwrap();
    }
    if let Some(p) = &doc.params {
        writeln!(out, "params: {}", format_params(p)).unwrap();
    }
    out.push('\n');
    for i in 0..m.rows() {
        let row: Result<Vec<String>, IoError> = (0..m.cols())
            .map(|j| {
                format_token(m.get(i, j), opts.signed).ok_or_else(|| {
                    IoError::Invalid(format!(
                        "entry ({i}, {j}) = {} has no single-token form",
                        m.get(i, j)
                    ))
                })
            })
            .collect();
        out.push_str(&row?.join(" "));
        out.push('\n');
    }
    Ok(out)
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
