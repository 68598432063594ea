//! Text, LaTeX and JSON renderings of a connection system.

use serde::{Deserialize, Serialize};

use crate::connection::ConnectionSystem;
use crate::error::{Error, Result};
use crate::invariants::{InvariantSource, InvariantTuple};
use crate::linalg::Matrix;
use crate::poly::{integral_factor, parse_expr, Alphabet, MPoly, RatFun, Style};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub num: String,
    pub den: String,
}

/// Serialized form of a [`ConnectionSystem`]; every polynomial is written in
/// the parseable expression grammar with exact ζ-coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub group: String,
    pub conductor: u32,
    pub rank: usize,
    #[serde(default = "default_source")]
    pub invariant_source: String,
    pub invariants: Vec<String>,
    pub m: u32,
    pub denominator: String,
    /// `matrices[l][row][col]` is entry (row, col) of A_{l+1}.
    pub matrices: Vec<Vec<Vec<EntryJson>>>,
}

fn default_source() -> String {
    InvariantSource::Catalog.as_str().to_string()
}

pub fn system_to_json_value(cs: &ConnectionSystem) -> SystemJson {
    SystemJson {
        group: cs.group.clone(),
        conductor: cs.conductor(),
        rank: cs.rank(),
        invariant_source: cs.invariants.source().as_str().to_string(),
        invariants: cs.invariants.phis().iter().map(ToString::to_string).collect(),
        m: cs.m,
        denominator: cs.denominator.to_string(),
        matrices: cs
            .a
            .iter()
            .map(|a| {
                (0..a.rows())
                    .map(|r| {
                        a.row(r)
                            .iter()
                            .map(|e| {
                                let (num, den) = e.integral_pair();
                                EntryJson { num: num.to_string(), den: den.to_string() }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn system_to_json(cs: &ConnectionSystem) -> String {
    let mut s = serde_json::to_string_pretty(&system_to_json_value(cs)).expect("serializable");
    s.push('\n');
    s
}

pub fn system_from_json(text: &str) -> Result<ConnectionSystem> {
    let v: SystemJson = serde_json::from_str(text)?;
    let bad = |msg: String| Error::Input(format!("malformed system: {msg}"));
    let n = v.rank;
    if n == 0 || v.conductor == 0 {
        return Err(bad("rank and conductor must be positive".into()));
    }
    if v.invariants.len() != n || v.matrices.len() != n {
        return Err(bad(format!("expected {n} invariants and {n} matrices")));
    }
    let source = match v.invariant_source.as_str() {
        "catalog" => InvariantSource::Catalog,
        "reynolds" => InvariantSource::Reynolds,
        other => return Err(bad(format!("unknown invariant source `{other}`"))),
    };
    let phis = v
        .invariants
        .iter()
        .map(|s| parse_expr(s, Alphabet::X, n, v.conductor))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let invariants = InvariantTuple::new(phis, source)?;
    let z = |s: &str| parse_expr(s, Alphabet::Z, n, v.conductor);
    let denominator = z(&v.denominator)?;
    if denominator.is_zero() {
        return Err(bad("zero denominator".into()));
    }
    let mut a = Vec::with_capacity(n);
    for (l, rows) in v.matrices.iter().enumerate() {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(bad(format!("matrix {} is not {n}x{n}", l + 1)));
        }
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|e| Ok(RatFun::new(z(&e.num)?, z(&e.den)?)?)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        a.push(Matrix::from_rows(parsed));
    }
    Ok(ConnectionSystem { group: v.group, a, denominator, invariants, m: v.m })
}

fn fraction_text(num: &MPoly, den: &MPoly, style: Style) -> String {
    let n = num.display(style);
    if den.as_constant().is_some_and(|c| c.is_one()) {
        return n;
    }
    let d = den.display(style);
    if style == Style::Latex {
        return format!("\\frac{{{n}}}{{{d}}}");
    }
    let wrap = |s: String, p: &MPoly| if p.len() > 1 || s.contains(' ') { format!("({s})") } else { s };
    format!("{} / {}", wrap(n, num), wrap(d, den))
}

pub fn render_text(cs: &ConnectionSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("group {} (rank {}, conductor {})\n", cs.group, cs.rank(), cs.conductor()));
    out.push_str(&format!("invariants ({}):\n", cs.invariants.source().as_str()));
    for (i, p) in cs.invariants.phis().iter().enumerate() {
        out.push_str(&format!("  z{} = {}\n", i + 1, p.display(Style::Text)));
    }
    out.push_str(&format!("m = {}\n", cs.m));
    out.push_str(&format!("common denominator: {}\n", cs.denominator.display(Style::Text)));
    for (l, a) in cs.a.iter().enumerate() {
        out.push_str(&format!("A{}:\n", l + 1));
        for (r, c, e) in a.indexed() {
            let (num, den) = e.integral_pair();
            out.push_str(&format!("  ({},{}): {}\n", r + 1, c + 1, fraction_text(&num, &den, Style::Text)));
        }
    }
    out
}

/// Prefactor form 1/D·(matrix) when every entry denominator divides a single
/// one and at most two distinct denominators occur.
fn prefactor_form(a: &Matrix<RatFun>) -> Option<(MPoly, Matrix<MPoly>)> {
    let mut distinct: Vec<&MPoly> = Vec::new();
    for e in a.iter().filter(|e| !e.num().is_zero()) {
        if !distinct.contains(&e.den()) {
            distinct.push(e.den());
        }
    }
    let big = (*distinct.iter().max_by_key(|d| (d.total_degree(), d.len()))?).clone();
    if distinct.len() > 2 || big.as_constant().is_some() {
        return None;
    }
    let nums = a
        .try_map(|e| if e.num().is_zero() { Ok(e.num().clone()) } else { big.exact_div(e.den()).map(|k| e.num() * &k) })
        .ok()?;
    let all: Vec<&MPoly> = nums.iter().chain(std::iter::once(&big)).collect();
    let f = integral_factor(&all);
    Some((big.scale_rational(&f), nums.map(|p| p.scale_rational(&f))))
}

pub fn render_latex(cs: &ConnectionSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("% group {}, invariants ({})\n", cs.group, cs.invariants.source().as_str()));
    for (i, p) in cs.invariants.phis().iter().enumerate() {
        out.push_str(&format!("z_{{{}}} = {} \\\\\n", i + 1, p.display(Style::Latex)));
    }
    for (l, a) in cs.a.iter().enumerate() {
        let n = a.rows();
        let (prefix, cells): (String, Vec<Vec<String>>) = match prefactor_form(a) {
            Some((den, nums)) => (
                format!("\\frac{{1}}{{{}}} ", den.display(Style::Latex)),
                (0..n).map(|r| nums.row(r).iter().map(|p| p.display(Style::Latex)).collect()).collect(),
            ),
            None => (
                String::new(),
                (0..n)
                    .map(|r| {
                        a.row(r)
                            .iter()
                            .map(|e| {
                                let (num, den) = e.integral_pair();
                                fraction_text(&num, &den, Style::Latex)
                            })
                            .collect()
                    })
                    .collect(),
            ),
        };
        let body = cells.iter().map(|r| r.join(" & ")).collect::<Vec<_>>().join(" \\\\\n  ");
        out.push_str(&format!("A_{{{}}} = {prefix}\\begin{{pmatrix}}\n  {body}\n\\end{{pmatrix}}\n", l + 1));
    }
    out
}

pub fn render_invariants(phi: &InvariantTuple, style: Style) -> String {
    phi.phis()
        .iter()
        .enumerate()
        .map(|(i, p)| match style {
            Style::Latex => format!("z_{{{}}} = {} \\\\\n", i + 1, p.display(style)),
            _ => format!("z{} = {}\n", i + 1, p.display(style)),
        })
        .collect()
}
