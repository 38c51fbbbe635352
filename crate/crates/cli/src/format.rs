//! Line-oriented text formats for algebras and spaces. Emission is
//! deterministic byte for byte; parse errors cite line numbers. Files are
//! UTF-8 with LF line endings and `#` comments.

use rmwb_core::algebra::{AlgebraParts, FiniteAlgebra, Profile, Table};
use rmwb_core::esakia::{Flavor, StructuredSpace};
use rmwb_core::order::FinitePoset;
use rmwb_core::relevant::RelevantSpace;
use rmwb_core::subset::Subset;

use crate::{CmdError, CmdResult};

#[derive(Debug, Clone)]
pub enum Structure {
    Algebra(FiniteAlgebra),
    Space(StructuredSpace),
    Relevant(RelevantSpace),
}

impl Structure {
    pub fn name(&self) -> &str {
        match self {
            Structure::Algebra(a) => &a.name,
            Structure::Space(x) => &x.name,
            Structure::Relevant(s) => &s.name,
        }
    }

    pub fn carrier_size(&self) -> usize {
        match self {
            Structure::Algebra(a) => a.n(),
            Structure::Space(x) => x.n(),
            Structure::Relevant(s) => s.n(),
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> CmdError {
    CmdError::Parse(format!("line {line}: {}", msg.into()))
}

struct Lines<'a> {
    /// (line number, tokens)
    rows: Vec<(usize, Vec<&'a str>)>,
}

fn tokenize(text: &str) -> Lines<'_> {
    let rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let body = match l.find('#') {
                Some(p) => &l[..p],
                None => l,
            };
            (i + 1, body.split_whitespace().collect::<Vec<_>>())
        })
        .filter(|(_, toks)| !toks.is_empty())
        .collect();
    Lines { rows }
}

/// Parses either an algebra file or a space file, dispatching on the first
/// keyword.
pub fn parse_structure(text: &str) -> CmdResult<Structure> {
    let lines = tokenize(text);
    let Some((first_no, first)) = lines.rows.first() else {
        return Err(CmdError::Parse("empty file".into()));
    };
    match first[0] {
        "algebra" => parse_algebra(&lines).map(Structure::Algebra),
        "space" => parse_space(&lines),
        other => Err(err(
            *first_no,
            format!("expected 'algebra' or 'space', found '{other}'"),
        )),
    }
}

fn parse_header<'a>(
    lines: &'a Lines<'a>,
    kind: &str,
    tag: &str,
) -> CmdResult<(String, &'a str, usize)> {
    let (no, toks) = &lines.rows[0];
    if toks.len() != 4 || toks[0] != kind || toks[2] != tag {
        return Err(err(*no, format!("expected '{kind} <name> {tag} <value>'")));
    }
    Ok((toks[1].to_string(), toks[3], *no))
}

struct NameTable {
    names: Vec<String>,
}

impl NameTable {
    fn index(&self, token: &str, line: usize) -> CmdResult<usize> {
        self.names
            .iter()
            .position(|n| n == token)
            .ok_or_else(|| err(line, format!("unknown element '{token}'")))
    }

    fn row(&self, toks: &[&str], line: usize) -> CmdResult<Vec<usize>> {
        if toks.len() != self.names.len() {
            return Err(err(
                line,
                format!("expected {} values, found {}", self.names.len(), toks.len()),
            ));
        }
        toks.iter().map(|t| self.index(t, line)).collect()
    }
}

fn parse_covers(toks: &[&str], table: &NameTable, line: usize) -> CmdResult<Vec<(usize, usize)>> {
    toks.iter()
        .map(|t| {
            let (lo, hi) = t
                .split_once('<')
                .ok_or_else(|| err(line, format!("expected '<lower><<upper>', found '{t}'")))?;
            Ok((table.index(lo, line)?, table.index(hi, line)?))
        })
        .collect()
}

fn parse_algebra(lines: &Lines<'_>) -> CmdResult<FiniteAlgebra> {
    let (name, profile_tok, hno) = parse_header(lines, "algebra", "profile")?;
    let profile = Profile::parse(profile_tok)
        .ok_or_else(|| err(hno, format!("unknown profile '{profile_tok}'")))?;

    let mut names: Option<(NameTable, usize)> = None;
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut parts = AlgebraParts::default();
    let mut mult_rows: Vec<(usize, Vec<usize>)> = Vec::new();

    for (no, toks) in lines.rows.iter().skip(1) {
        let keyword = toks[0];
        let rest = &toks[1..];
        if keyword == "elements" {
            if names.is_some() {
                return Err(err(*no, "duplicate 'elements' line"));
            }
            names = Some((
                NameTable {
                    names: rest.iter().map(|s| s.to_string()).collect(),
                },
                *no,
            ));
            continue;
        }
        let (table, _) = names
            .as_ref()
            .ok_or_else(|| err(*no, "'elements' must come before other fields"))?;
        match keyword {
            "covers" => covers.extend(parse_covers(rest, table, *no)?),
            "unit" => match rest {
                [u] => parts.unit = Some(table.index(u, *no)?),
                _ => return Err(err(*no, "expected 'unit <element>'")),
            },
            "neg" => parts.neg = Some(table.row(rest, *no)?),
            "mult" => {
                let head = rest
                    .first()
                    .and_then(|t| t.strip_suffix(':'))
                    .ok_or_else(|| err(*no, "expected 'mult <element>: <values>'"))?;
                let row = table.index(head, *no)?;
                mult_rows.push((row, table.row(&rest[1..], *no)?));
            }
            "const" => match rest {
                [which, v] => {
                    let idx = Some(table.index(v, *no)?);
                    match *which {
                        "f" => parts.f = idx,
                        "bot" => parts.bot = idx,
                        "top" => parts.top = idx,
                        other => return Err(err(*no, format!("unknown constant '{other}'"))),
                    }
                }
                _ => return Err(err(*no, "expected 'const <f|bot|top> <element>'")),
            },
            other => return Err(err(*no, format!("unknown keyword '{other}'"))),
        }
    }

    let (table, eno) = names.ok_or_else(|| err(hno, "missing 'elements' line"))?;
    let n = table.names.len();
    if !mult_rows.is_empty() {
        let mut mult: Table = vec![Vec::new(); n];
        for (row, vals) in mult_rows {
            if !mult[row].is_empty() {
                return Err(err(
                    eno,
                    format!("duplicate mult row for '{}'", table.names[row]),
                ));
            }
            mult[row] = vals;
        }
        if mult.iter().any(|r| r.is_empty()) {
            return Err(err(eno, "missing mult rows"));
        }
        parts.mult = Some(mult);
    }
    let poset = FinitePoset::from_covers(table.names, &covers).map_err(CmdError::from)?;
    FiniteAlgebra::assemble(name, poset, profile, parts).map_err(CmdError::from)
}

fn parse_space(lines: &Lines<'_>) -> CmdResult<Structure> {
    let (name, flavor_tok, hno) = parse_header(lines, "space", "flavor")?;
    if flavor_tok == "relevant" {
        return parse_relevant(lines, name).map(Structure::Relevant);
    }
    let flavor = Flavor::parse(flavor_tok)
        .ok_or_else(|| err(hno, format!("unknown flavor '{flavor_tok}'")))?;

    let mut names: Option<NameTable> = None;
    let mut covers = Vec::new();
    let mut d = Subset::EMPTY;
    let mut top = None;
    for (no, toks) in lines.rows.iter().skip(1) {
        let keyword = toks[0];
        let rest = &toks[1..];
        if keyword == "points" {
            names = Some(NameTable {
                names: rest.iter().map(|s| s.to_string()).collect(),
            });
            continue;
        }
        let table = names
            .as_ref()
            .ok_or_else(|| err(*no, "'points' must come before other fields"))?;
        match keyword {
            "covers" => covers.extend(parse_covers(rest, table, *no)?),
            "designated" => {
                for t in rest {
                    d.insert(table.index(t, *no)?);
                }
            }
            "top" => match rest {
                [p] => top = Some(table.index(p, *no)?),
                _ => return Err(err(*no, "expected 'top <point>'")),
            },
            other => return Err(err(*no, format!("unknown keyword '{other}'"))),
        }
    }
    let table = names.ok_or_else(|| err(hno, "missing 'points' line"))?;
    let poset = FinitePoset::from_covers(table.names, &covers).map_err(CmdError::from)?;
    Ok(Structure::Space(StructuredSpace {
        name,
        poset,
        d,
        top,
        q: None,
        flavor,
    }))
}

fn parse_relevant(lines: &Lines<'_>, name: String) -> CmdResult<RelevantSpace> {
    let mut names: Option<NameTable> = None;
    let mut covers = Vec::new();
    let mut prime: Option<Vec<usize>> = None;
    let mut i_set = Subset::EMPTY;
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for (no, toks) in lines.rows.iter().skip(1) {
        let keyword = toks[0];
        let rest = &toks[1..];
        if keyword == "points" {
            names = Some(NameTable {
                names: rest.iter().map(|s| s.to_string()).collect(),
            });
            continue;
        }
        let table = names
            .as_ref()
            .ok_or_else(|| err(*no, "'points' must come before other fields"))?;
        match keyword {
            "covers" => covers.extend(parse_covers(rest, table, *no)?),
            "prime" => prime = Some(table.row(rest, *no)?),
            "I" => {
                for t in rest {
                    i_set.insert(table.index(t, *no)?);
                }
            }
            "R" => match rest {
                [x, y, z] => triples.push((
                    table.index(x, *no)?,
                    table.index(y, *no)?,
                    table.index(z, *no)?,
                )),
                _ => return Err(err(*no, "expected 'R <x> <y> <z>'")),
            },
            other => return Err(err(*no, format!("unknown keyword '{other}'"))),
        }
    }
    let table = names.ok_or_else(|| CmdError::Parse("missing 'points' line".into()))?;
    let n = table.names.len();
    let prime = prime.ok_or_else(|| CmdError::Parse("missing 'prime' line".into()))?;
    let poset = FinitePoset::from_covers(table.names, &covers).map_err(CmdError::from)?;
    let mut r = vec![vec![Subset::EMPTY; n]; n];
    for (x, y, z) in triples {
        r[x][y].insert(z);
    }
    Ok(RelevantSpace {
        name,
        poset,
        r,
        prime,
        i_set,
    })
}

fn push_tokens(out: &mut String, keyword: &str, tokens: impl IntoIterator<Item = String>) {
    out.push_str(keyword);
    for t in tokens {
        out.push(' ');
        out.push_str(&t);
    }
    out.push('\n');
}

fn cover_tokens(poset: &FinitePoset) -> Vec<String> {
    poset
        .covers()
        .into_iter()
        .map(|(lo, hi)| format!("{}<{}", poset.name(lo), poset.name(hi)))
        .collect()
}

pub fn emit_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "algebra {} profile {}\n",
        a.name,
        a.profile.as_str()
    ));
    push_tokens(&mut out, "elements", a.poset.names().iter().cloned());
    let covers = cover_tokens(&a.poset);
    if !covers.is_empty() {
        push_tokens(&mut out, "covers", covers);
    }
    if let Some(u) = a.unit {
        out.push_str(&format!("unit {}\n", a.name_of(u)));
    }
    if a.neg.is_some() {
        push_tokens(
            &mut out,
            "neg",
            (0..a.n()).map(|i| a.name_of(a.neg_of(i)).to_string()),
        );
    }
    if a.profile.has_free_mult() {
        for i in 0..a.n() {
            push_tokens(
                &mut out,
                &format!("mult {}:", a.name_of(i)),
                (0..a.n()).map(|j| a.name_of(a.mult_of(i, j)).to_string()),
            );
        }
    }
    for (tag, c) in [("f", a.f), ("bot", a.bot), ("top", a.top)] {
        if let Some(v) = c {
            out.push_str(&format!("const {tag} {}\n", a.name_of(v)));
        }
    }
    out
}

pub fn emit_space(x: &StructuredSpace) -> String {
    let mut out = String::new();
    out.push_str(&format!("space {} flavor {}\n", x.name, x.flavor.as_str()));
    push_tokens(&mut out, "points", x.poset.names().iter().cloned());
    let covers = cover_tokens(&x.poset);
    if !covers.is_empty() {
        push_tokens(&mut out, "covers", covers);
    }
    if !x.d.is_empty() {
        push_tokens(
            &mut out,
            "designated",
            x.d.iter().map(|i| x.poset.name(i).to_string()),
        );
    }
    if let Some(t) = x.top {
        out.push_str(&format!("top {}\n", x.poset.name(t)));
    }
    out
}

pub fn emit_relevant(s: &RelevantSpace) -> String {
    let mut out = String::new();
    out.push_str(&format!("space {} flavor relevant\n", s.name));
    push_tokens(&mut out, "points", s.poset.names().iter().cloned());
    let covers = cover_tokens(&s.poset);
    if !covers.is_empty() {
        push_tokens(&mut out, "covers", covers);
    }
    push_tokens(
        &mut out,
        "prime",
        s.prime.iter().map(|&p| s.poset.name(p).to_string()),
    );
    if !s.i_set.is_empty() {
        push_tokens(
            &mut out,
            "I",
            s.i_set.iter().map(|i| s.poset.name(i).to_string()),
        );
    }
    for (x, y, z) in s.triples() {
        out.push_str(&format!(
            "R {} {} {}\n",
            s.poset.name(x),
            s.poset.name(y),
            s.poset.name(z)
        ));
    }
    out
}

pub fn emit_structure(s: &Structure) -> String {
    match s {
        Structure::Algebra(a) => emit_algebra(a),
        Structure::Space(x) => emit_space(x),
        Structure::Relevant(r) => emit_relevant(r),
    }
}
