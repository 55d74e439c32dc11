//! Plain-text input formats and their renderers.
//!
//! Every format skips blank lines and treats text after `#` as a comment.
//! Parse errors carry 1-based line and column numbers.
//!
//! Set function:
//!
//! ```text
//! setfn n=2
//! 00 0
//! 01 1
//! 10 1
//! 11 1.5
//! family d=1 target=11      # optional
//! 01
//! 10
//! ```
//!
//! Masks are binary with the most significant bit first, so the rightmost
//! digit is element 1. All `2^n` masks must appear exactly once.
//!
//! Joint PMF (`values=` is optional; probabilities may be written `a/b`):
//!
//! ```text
//! pmf n=2 sizes=2,3 values=0,1;-1,0,1
//! 0 0 1/2
//! 1 2 0.5
//! ```
//!
//! Point set: one point per line as whitespace-separated integers.
//!
//! Code set: one word per line over `+`/`-` or `1`/`0`, coordinate 1 first.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::hypercube::CodeSet;
use crate::infomeasures::JointPmf;
use crate::setfn::{GroundSet, SetFunction, SubsetFamily};
use crate::{Error, Mask, Result};

/// One significant line: 1-based line number and `(column, token)` pairs.
struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn err(&self, column: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.number, column, msg)
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |(c, t)| c + t.chars().count())
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, (byte, ch)) in content.char_indices().enumerate() {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some((pos, byte)),
                    (true, Some((col, b))) => {
                        tokens.push((col + 1, &content[b..byte]));
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some((col, b)) = start {
                tokens.push((col + 1, &content[b..]));
            }
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

/// Parses `key=value` tokens after a keyword; unknown keys are errors.
fn header<'a>(
    line: &Line<'a>,
    keyword: &str,
    allowed: &[&str],
) -> Result<BTreeMap<&'a str, (usize, &'a str)>> {
    let (col, first) = line.tokens[0];
    if first != keyword {
        return Err(line.err(col, format!("expected header starting with {keyword:?}")));
    }
    let mut out = BTreeMap::new();
    for &(col, tok) in &line.tokens[1..] {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| line.err(col, format!("expected key=value, got {tok:?}")))?;
        if !allowed.contains(&key) {
            return Err(line.err(col, format!("unknown header key {key:?}")));
        }
        if out.insert(key, (col + key.len() + 1, value)).is_some() {
            return Err(line.err(col, format!("repeated header key {key:?}")));
        }
    }
    Ok(out)
}

fn required<'a>(
    line: &Line<'a>,
    map: &BTreeMap<&'a str, (usize, &'a str)>,
    key: &str,
) -> Result<(usize, &'a str)> {
    map.get(key)
        .copied()
        .ok_or_else(|| line.err(line.end_column(), format!("header is missing {key}=")))
}

fn parse_usize(line: &Line<'_>, col: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| {
        line.err(
            col,
            format!("{what} must be a non-negative integer, got {tok:?}"),
        )
    })
}

/// Decimal number or fraction `a/b`.
fn parse_real(line: &Line<'_>, col: usize, tok: &str) -> Result<f64> {
    let bad = || line.err(col, format!("expected a number, got {tok:?}"));
    let v = match tok.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.parse().map_err(|_| bad())?;
            let b: f64 = b.parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(line.err(col, "division by zero"));
            }
            a / b
        }
        None => tok.parse().map_err(|_| bad())?,
    };
    if !v.is_finite() {
        return Err(line.err(col, format!("value {tok:?} is not finite")));
    }
    Ok(v)
}

fn parse_binary(line: &Line<'_>, col: usize, tok: &str, n: usize) -> Result<Mask> {
    if tok.len() != n {
        return Err(line.err(col, format!("expected {n} binary digits, got {tok:?}")));
    }
    let mut mask: Mask = 0;
    for (i, ch) in tok.chars().enumerate() {
        let bit = match ch {
            '0' => 0,
            '1' => 1,
            _ => return Err(line.err(col + i, format!("unexpected character {ch:?}"))),
        };
        mask = mask << 1 | bit;
    }
    Ok(mask)
}

fn expect_len(line: &Line<'_>, want: usize, shape: &str) -> Result<()> {
    if line.tokens.len() != want {
        let col = line.tokens.get(want).map_or(line.end_column(), |t| t.0);
        return Err(line.err(col, format!("expected {shape}")));
    }
    Ok(())
}

/// Optional cover section of a set-function file.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: SubsetFamily,
    pub d: usize,
    pub target: Mask,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetFnFile {
    pub f: SetFunction,
    pub family: Option<FamilySpec>,
}

pub fn parse_setfn(text: &str) -> Result<SetFnFile> {
    let all = lines(text);
    let head = all
        .first()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let map = header(head, "setfn", &["n"])?;
    let (col, tok) = required(head, &map, "n")?;
    let n = parse_usize(head, col, tok, "n")?;
    let cap = crate::setfn::max_ground_size();
    if n == 0 || n > cap {
        return Err(head.err(col, format!("n must lie in 1..={cap}, got {n}")));
    }
    let size = 1usize << n;
    let split = all
        .iter()
        .position(|l| l.tokens[0].1 == "family")
        .unwrap_or(all.len());
    let mut values: Vec<Option<f64>> = vec![None; size];
    for line in &all[1..split] {
        expect_len(line, 2, "<mask> <value>")?;
        let (mc, mt) = line.tokens[0];
        let mask = parse_binary(line, mc, mt, n)? as usize;
        let (vc, vt) = line.tokens[1];
        let v = parse_real(line, vc, vt)?;
        if values[mask].replace(v).is_some() {
            return Err(line.err(mc, format!("mask {mt} listed twice")));
        }
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        let at = all[..split].last().map_or(head.number, |l| l.number);
        return Err(Error::parse(
            at,
            1,
            format!("missing entry for mask {}", render_mask(missing as Mask, n)),
        ));
    }
    let ground = GroundSet::new(n)?;
    let f = SetFunction::new(
        ground.clone(),
        values.into_iter().map(Option::unwrap).collect(),
    )?;
    let family = match all.get(split) {
        None => None,
        Some(fh) => {
            let map = header(fh, "family", &["d", "target"])?;
            let (dc, dt) = required(fh, &map, "d")?;
            let d = parse_usize(fh, dc, dt, "d")?;
            let target = match map.get("target") {
                Some(&(tc, tt)) => parse_binary(fh, tc, tt, n)?,
                None => ground.full(),
            };
            let mut members = Vec::new();
            for line in &all[split + 1..] {
                expect_len(line, 1, "one binary mask per family member")?;
                let (c, t) = line.tokens[0];
                members.push(parse_binary(line, c, t, n)?);
            }
            if members.is_empty() {
                return Err(fh.err(1, "family section has no members"));
            }
            Some(FamilySpec {
                family: SubsetFamily::new(ground, members)?,
                d,
                target,
            })
        }
    };
    Ok(SetFnFile { f, family })
}

/// `mask` as `n` binary digits, most significant first.
pub fn render_mask(mask: Mask, n: usize) -> String {
    (0..n)
        .rev()
        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn render_setfn(f: &SetFunction, family: Option<&FamilySpec>) -> String {
    let n = f.n();
    let mut out = format!("setfn n={n}\n");
    for (mask, v) in f.values().iter().enumerate() {
        let _ = writeln!(out, "{} {v:?}", render_mask(mask as Mask, n));
    }
    if let Some(spec) = family {
        let _ = writeln!(
            out,
            "family d={} target={}",
            spec.d,
            render_mask(spec.target, n)
        );
        for &m in spec.family.members() {
            let _ = writeln!(out, "{}", render_mask(m, n));
        }
    }
    out
}

pub fn parse_pmf(text: &str) -> Result<JointPmf> {
    let all = lines(text);
    let head = all
        .first()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let map = header(head, "pmf", &["n", "sizes", "values"])?;
    let (nc, nt) = required(head, &map, "n")?;
    let n = parse_usize(head, nc, nt, "n")?;
    let (sc, st) = required(head, &map, "sizes")?;
    let sizes = st
        .split(',')
        .map(|s| parse_usize(head, sc, s, "alphabet size"))
        .collect::<Result<Vec<_>>>()?;
    if sizes.len() != n {
        return Err(head.err(sc, format!("sizes lists {} alphabets, n={n}", sizes.len())));
    }
    if n == 0 || sizes.contains(&0) {
        return Err(head.err(sc, "need at least one variable and non-empty alphabets"));
    }
    let cells = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&c| c <= 1 << 26)
        .ok_or_else(|| head.err(sc, "joint alphabet is too large"))?;
    let mut probs = vec![0.0; cells];
    let mut seen = vec![false; cells];
    for line in &all[1..] {
        expect_len(
            line,
            n + 1,
            "one index per variable followed by a probability",
        )?;
        let mut idx = 0;
        let mut stride = 1;
        for (i, &(c, t)) in line.tokens[..n].iter().enumerate() {
            let x = parse_usize(line, c, t, "symbol index")?;
            if x >= sizes[i] {
                return Err(line.err(
                    c,
                    format!("index {x} out of range for alphabet size {}", sizes[i]),
                ));
            }
            idx += x * stride;
            stride *= sizes[i];
        }
        let (pc, pt) = line.tokens[n];
        let p = parse_real(line, pc, pt)?;
        if seen[idx] {
            return Err(line.err(line.tokens[0].0, "cell listed twice"));
        }
        seen[idx] = true;
        probs[idx] = p;
    }
    let pmf = JointPmf::new(sizes.clone(), probs)?;
    match map.get("values") {
        None => Ok(pmf),
        Some(&(vc, vt)) => {
            let values = vt
                .split(';')
                .map(|group| {
                    group
                        .split(',')
                        .map(|x| {
                            x.parse::<i64>().map_err(|_| {
                                head.err(vc, format!("symbol value {x:?} is not an integer"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            pmf.with_integer_values(values)
        }
    }
}

pub fn render_pmf(p: &JointPmf) -> String {
    let sizes: Vec<String> = p.sizes().iter().map(ToString::to_string).collect();
    let mut out = format!("pmf n={} sizes={}", p.var_count(), sizes.join(","));
    if let Some(values) = p.integer_values() {
        let groups: Vec<String> = values
            .iter()
            .map(|g| {
                g.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let _ = write!(out, " values={}", groups.join(";"));
    }
    out.push('\n');
    for (idx, &q) in p.probs().iter().enumerate() {
        if q > 0.0 {
            let cell: Vec<String> = p.cell_of(idx).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{} {q:?}", cell.join(" "));
        }
    }
    out
}

pub fn parse_points(text: &str) -> Result<Vec<Vec<i64>>> {
    let all = lines(text);
    let first = all.first().ok_or_else(|| Error::parse(1, 1, "no points"))?;
    let n = first.tokens.len();
    all.iter()
        .map(|line| {
            expect_len(line, n, &format!("{n} integer coordinates"))?;
            line.tokens
                .iter()
                .map(|&(c, t)| {
                    t.parse::<i64>()
                        .map_err(|_| line.err(c, format!("expected an integer, got {t:?}")))
                })
                .collect()
        })
        .collect()
}

pub fn render_points(points: &[Vec<i64>]) -> String {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeSetFile {
    pub set: CodeSet,
    /// One message per dropped duplicate word.
    pub warnings: Vec<String>,
}

pub fn parse_code_set(text: &str) -> Result<CodeSetFile> {
    let all = lines(text);
    let first = all.first().ok_or_else(|| Error::parse(1, 1, "no words"))?;
    let n = first.tokens[0].1.chars().count();
    let mut seen: BTreeMap<Mask, usize> = BTreeMap::new();
    let mut warnings = Vec::new();
    for line in &all {
        expect_len(line, 1, "one word per line")?;
        let (col, tok) = line.tokens[0];
        if tok.chars().count() != n {
            return Err(line.err(col, format!("expected a word of length {n}, got {tok:?}")));
        }
        if n > crate::hypercube::MAX_DIM {
            return Err(line.err(
                col,
                format!(
                    "words longer than {} are not supported",
                    crate::hypercube::MAX_DIM
                ),
            ));
        }
        let mut w: Mask = 0;
        for (i, ch) in tok.chars().enumerate() {
            match ch {
                '+' | '1' => w |= 1 << i,
                '-' | '0' => {}
                _ => return Err(line.err(col + i, format!("unexpected character {ch:?}"))),
            }
        }
        if let Some(prev) = seen.insert(w, line.number) {
            seen.insert(w, prev);
            warnings.push(format!(
                "line {}: duplicate of line {prev} dropped ({tok})",
                line.number
            ));
        }
    }
    let set = CodeSet::new(n, seen.into_keys().collect())?;
    Ok(CodeSetFile { set, warnings })
}

/// Words over `+`/`-`, coordinate 1 first, in canonical order.
pub fn render_code_set(a: &CodeSet) -> String {
    let mut out = String::new();
    for &w in a.words() {
        let word: String = (0..a.n())
            .map(|i| if w >> i & 1 == 1 { '+' } else { '-' })
            .collect();
        let _ = writeln!(out, "{word}");
    }
    out
}
