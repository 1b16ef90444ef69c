//! Line-oriented text format for groups, subgroups, homomorphisms and words.
//!
//! ```text
//! # comment
//! group c=2 r=2
//! row 0 0 2            # relator matrix row (already in full form)
//! relator a1^2 a2^-1   # or arbitrary relator words
//! subgroup
//! row 2 0 0            # subgroup generator by coordinates
//! gen a2 a1^-3         # or as a word
//! target c=1 r=1       # codomain of a homomorphism, with its own row/relator lines
//! map a1 -> a1^2       # generator image
//! image a1^4           # element of the target
//! word a1^5 a2^-1      # element of the main group
//! ```
//!
//! Words are whitespace-separated factors `a<k>` or `a<k>^<int>` with `k`
//! 1-based; `1` stands for the empty word. Integers are decimal of any size.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::free_nilpotent::FreeNilpotentGroup;
use crate::presentations::{
    make_quotient_presentation, quotient_by_elements, FullFormMatrix, NilpotentPresentation,
    QuotientPresentation,
};
use crate::word::ExpWord;

/// A group declared by a `group` or `target` header.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub free: Arc<FreeNilpotentGroup>,
    pub rows: Vec<Coords>,
    pub relators: Vec<ExpWord>,
}

impl GroupSpec {
    /// Rows alone are validated as a full-form normal subgroup; relator words
    /// (with any rows) are closed and reduced.
    pub fn presentation(&self) -> Result<QuotientPresentation> {
        if self.relators.is_empty() {
            return make_quotient_presentation(&self.free, &self.rows);
        }
        let mut elements = self.rows.clone();
        for w in &self.relators {
            elements.push(self.free.eval(w)?);
        }
        quotient_by_elements(&self.free, &elements)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupGenerator {
    Row(Coords),
    Word(ExpWord),
}

#[derive(Clone, Debug)]
pub struct Document {
    pub group: GroupSpec,
    /// `None` when there is no `subgroup` section.
    pub subgroup: Option<Vec<SubgroupGenerator>>,
    pub target: Option<GroupSpec>,
    pub maps: Vec<(ExpWord, ExpWord)>,
    /// `word` lines, over the main group.
    pub words: Vec<ExpWord>,
    /// `image` lines, over the target group.
    pub images: Vec<ExpWord>,
}

enum Section {
    Group,
    Subgroup,
    Target,
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> Error {
        // `at` is always a subslice of `text`.
        let offset = at.as_ptr() as usize - self.text.as_ptr() as usize;
        Error::Parse {
            line: self.line,
            column: self.text[..offset].chars().count() + 1,
            message: message.into(),
        }
    }

    fn end(&self, message: impl Into<String>) -> Error {
        self.err(&self.text[self.text.len()..], message)
    }
}

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split_whitespace()
}

fn parse_int(cur: &Cursor<'_>, tok: &str) -> Result<BigInt> {
    let digits = tok.strip_prefix(['+', '-']).unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(cur.err(tok, format!("expected an integer, found `{tok}`")));
    }
    tok.parse()
        .map_err(|_| cur.err(tok, format!("expected an integer, found `{tok}`")))
}

fn parse_small(cur: &Cursor<'_>, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| {
        cur.err(
            tok,
            format!("expected a non-negative {what}, found `{tok}`"),
        )
    })
}

fn parse_header(cur: &Cursor<'_>, rest: &str) -> Result<Arc<FreeNilpotentGroup>> {
    let mut c = None;
    let mut r = None;
    for tok in tokens(rest) {
        if let Some(v) = tok.strip_prefix("c=") {
            c = Some(parse_small(cur, v, "class")?);
        } else if let Some(v) = tok.strip_prefix("r=") {
            r = Some(parse_small(cur, v, "rank")?);
        } else {
            return Err(cur.err(
                tok,
                format!("expected `c=<int>` or `r=<int>`, found `{tok}`"),
            ));
        }
    }
    match (c, r) {
        (Some(c), Some(r)) => FreeNilpotentGroup::new(c, r).map_err(|e| match e {
            Error::InvalidInput(m) => cur.err(rest.trim_start(), m),
            other => other,
        }),
        _ => Err(cur.end("header needs both `c=<int>` and `r=<int>`")),
    }
}

fn parse_row(cur: &Cursor<'_>, rest: &str, m: usize) -> Result<Coords> {
    let mut entries = Vec::with_capacity(m);
    for tok in tokens(rest) {
        if entries.len() == m {
            return Err(cur.err(tok, format!("row has more than {m} entries")));
        }
        entries.push(parse_int(cur, tok)?);
    }
    if entries.len() < m {
        return Err(cur.end(format!("row has {} entries, expected {m}", entries.len())));
    }
    Ok(Coords::new(entries))
}

/// Parses a word whose letters must be below `limit`.
fn parse_word_in(cur: &Cursor<'_>, s: &str, limit: usize) -> Result<ExpWord> {
    let mut w = ExpWord::new();
    for tok in tokens(s) {
        if tok == "1" {
            continue;
        }
        let body = tok.strip_prefix('a').ok_or_else(|| {
            cur.err(
                tok,
                format!("expected a factor `a<k>^<int>`, found `{tok}`"),
            )
        })?;
        let (index, exp) = match body.split_once('^') {
            Some((i, e)) => (i, parse_int(cur, e)?),
            None => (body, BigInt::from(1)),
        };
        let k: usize = index
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| cur.err(tok, format!("bad letter index in `{tok}`")))?;
        if k > limit {
            return Err(cur.err(tok, format!("letter a{k} is outside a1..a{limit}")));
        }
        w.push(k - 1, exp);
    }
    Ok(w)
}

/// Parses a standalone word such as `a1^5 a2^-1`.
pub fn parse_word(s: &str) -> Result<ExpWord> {
    parse_word_in(&Cursor { line: 1, text: s }, s, usize::MAX)
}

/// Parses a whole input document.
pub fn parse_document(input: &str) -> Result<Document> {
    let mut group: Option<GroupSpec> = None;
    let mut target: Option<GroupSpec> = None;
    let mut subgroup: Option<Vec<SubgroupGenerator>> = None;
    let mut maps = Vec::new();
    let mut words = Vec::new();
    let mut images = Vec::new();
    let mut section = Section::Group;

    for (n, raw) in input.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let cur = Cursor { line: n + 1, text };
        let trimmed = text.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let (keyword, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, &trimmed[trimmed.len()..]),
        };
        if keyword != "group" && group.is_none() {
            return Err(cur.err(
                keyword,
                "input must start with a `group c=<int> r=<int>` line",
            ));
        }
        match keyword {
            "group" => {
                if group.is_some() {
                    return Err(cur.err(keyword, "duplicate `group` line"));
                }
                group = Some(GroupSpec {
                    free: parse_header(&cur, rest)?,
                    rows: Vec::new(),
                    relators: Vec::new(),
                });
                section = Section::Group;
            }
            "target" => {
                if target.is_some() {
                    return Err(cur.err(keyword, "duplicate `target` line"));
                }
                target = Some(GroupSpec {
                    free: parse_header(&cur, rest)?,
                    rows: Vec::new(),
                    relators: Vec::new(),
                });
                section = Section::Target;
            }
            "subgroup" => {
                if !rest.trim().is_empty() {
                    return Err(cur.err(rest.trim_start(), "`subgroup` takes no arguments"));
                }
                if subgroup.is_some() {
                    return Err(cur.err(keyword, "duplicate `subgroup` line"));
                }
                subgroup = Some(Vec::new());
                section = Section::Subgroup;
            }
            "row" => {
                let g = group.as_mut().unwrap();
                match section {
                    Section::Group => {
                        let row = parse_row(&cur, rest, g.free.m())?;
                        g.rows.push(row);
                    }
                    Section::Subgroup => {
                        let row = parse_row(&cur, rest, g.free.m())?;
                        subgroup.as_mut().unwrap().push(SubgroupGenerator::Row(row));
                    }
                    Section::Target => {
                        let t = target.as_mut().unwrap();
                        let row = parse_row(&cur, rest, t.free.m())?;
                        t.rows.push(row);
                    }
                }
            }
            "relator" => {
                let spec = match section {
                    Section::Group => group.as_mut().unwrap(),
                    Section::Target => target.as_mut().unwrap(),
                    Section::Subgroup => {
                        return Err(
                            cur.err(keyword, "`relator` is not allowed in a subgroup section")
                        )
                    }
                };
                let w = parse_word_in(&cur, rest, spec.free.r())?;
                spec.relators.push(w);
            }
            "gen" => {
                let Section::Subgroup = section else {
                    return Err(cur.err(keyword, "`gen` lines belong in a subgroup section"));
                };
                let w = parse_word_in(&cur, rest, group.as_ref().unwrap().free.m())?;
                subgroup.as_mut().unwrap().push(SubgroupGenerator::Word(w));
            }
            "map" => {
                let Some(t) = target.as_ref() else {
                    return Err(cur.err(keyword, "`map` needs a preceding `target` line"));
                };
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| cur.end("expected `map <word> -> <word>`"))?;
                let from = parse_word_in(&cur, lhs, group.as_ref().unwrap().free.m())?;
                let to = parse_word_in(&cur, rhs, t.free.m())?;
                maps.push((from, to));
            }
            "word" => {
                words.push(parse_word_in(&cur, rest, group.as_ref().unwrap().free.m())?);
            }
            "image" => {
                let Some(t) = target.as_ref() else {
                    return Err(cur.err(keyword, "`image` needs a preceding `target` line"));
                };
                images.push(parse_word_in(&cur, rest, t.free.m())?);
            }
            other => {
                return Err(cur.err(keyword, format!("unknown directive `{other}`")));
            }
        }
    }
    let group = group.ok_or(Error::Parse {
        line: input.lines().count().max(1),
        column: 1,
        message: "missing `group c=<int> r=<int>` line".into(),
    })?;
    Ok(Document {
        group,
        subgroup,
        target,
        maps,
        words,
        images,
    })
}

/// One row per line.
pub fn format_matrix(m: &FullFormMatrix) -> String {
    format_rows(m.rows())
}

pub fn format_rows(rows: &[Coords]) -> String {
    rows.iter().map(|r| format!("{r}\n")).collect()
}

/// Relations of a nilpotent presentation over generators `g1, …, gs`:
///
/// ```text
/// generators 3
/// order g1 inf
/// power g1 = <tail>
/// commute g2 g1 = <tail>       g2 g1 = g1 g2 · tail
/// commute-inv g2 g1 = <tail>   g2^-1 g1 = g1 g2^-1 · tail
/// ```
pub fn format_nilpotent_presentation(p: &NilpotentPresentation) -> String {
    let mut out = format!("generators {}\n", p.len());
    for i in 0..p.len() {
        match p.order(i) {
            Some(e) => out.push_str(&format!("order g{} {e}\n", i + 1)),
            None => out.push_str(&format!("order g{} inf\n", i + 1)),
        }
    }
    for i in 0..p.len() {
        if let Some(t) = p.power(i) {
            out.push_str(&format!("power g{} = {t}\n", i + 1));
        }
    }
    for j in 0..p.len() {
        for i in 0..j {
            out.push_str(&format!(
                "commute g{} g{} = {}\n",
                j + 1,
                i + 1,
                p.commutation(i, j)
            ));
            out.push_str(&format!(
                "commute-inv g{} g{} = {}\n",
                j + 1,
                i + 1,
                p.inverse_commutation(i, j)
            ));
        }
    }
    out
}
