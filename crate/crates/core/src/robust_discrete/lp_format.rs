//! LP-file export and re-import of the discrete MIPs.
//!
//! Coefficients are written as exact decimals. A row containing a value whose
//! denominator is not of the form `2^a 5^b` is first scaled by the LCM of its
//! denominators, so the file always describes the model exactly.

use std::collections::HashMap;
use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{Bound, LpModel, Relation, Sense};
use crate::model::Problem;
use crate::rational::{denom_lcm, exact_decimal, parse_rational, to_text, Rational};
use crate::selection::DualCandidate;

use super::mip::{MipBlock, MipModel};

const WRAP: usize = 200;

fn scaled(coeffs: &[Rational], rhs: &Rational) -> (Vec<Rational>, Rational) {
    if coeffs.iter().chain(std::iter::once(rhs)).all(|c| exact_decimal(c).is_some()) {
        return (coeffs.to_vec(), rhs.clone());
    }
    let s = Rational::from_integer(denom_lcm(coeffs.iter().chain(std::iter::once(rhs))));
    (coeffs.iter().map(|c| c * &s).collect(), rhs * &s)
}

fn dec(v: &Rational) -> String {
    exact_decimal(v).expect("row was scaled to exact decimals")
}

/// Writes `name: terms` with line wrapping; returns the open line.
fn push_terms(out: &mut String, head: String, coeffs: &[Rational], names: &[String]) -> String {
    let mut line = head;
    let mut first = true;
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
        let mag = c.abs();
        let term = if mag.is_one() { names[j].clone() } else { format!("{} {}", dec(&mag), names[j]) };
        let piece = if sign.is_empty() { term } else { format!("{sign} {term}") };
        if line.len() + piece.len() + 1 > WRAP {
            out.push_str(&line);
            out.push('\n');
            line = "   ".into();
        }
        line.push(' ');
        line.push_str(&piece);
        first = false;
    }
    if first {
        line.push_str(&format!(" 0 {}", names[0]));
    }
    line
}

/// Renders the model in LP file format. Output is deterministic.
pub fn write_lp(m: &MipModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ problem {}", m.problem.as_str());
    for (l, d) in m.pairs.iter().enumerate() {
        let _ = writeln!(out, "\\ block {} alpha {} beta {}", l + 1, to_text(&d.alpha), to_text(&d.beta));
    }
    for (l, a) in m.alphas.iter().enumerate() {
        let _ = writeln!(out, "\\ block {} alpha {}", l + 1, to_text(a));
    }
    out.push_str(match m.lp.sense {
        Sense::Min => "Minimize\n",
        Sense::Max => "Maximize\n",
    });
    let (obj, _) = scaled(&m.lp.objective, &Rational::zero());
    let line = push_terms(&mut out, " obj:".into(), &obj, &m.lp.names);
    out.push_str(&line);
    out.push('\n');
    out.push_str("Subject To\n");
    for (r, name) in m.lp.rows.iter().zip(&m.row_names) {
        let (coeffs, rhs) = scaled(&r.coeffs, &r.rhs);
        let mut line = push_terms(&mut out, format!(" {name}:"), &coeffs, &m.lp.names);
        let rel = match r.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = write!(line, " {rel} {}", dec(&rhs));
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("Bounds\n");
    for (j, b) in m.lp.bounds.iter().enumerate() {
        if m.binaries.contains(&j) {
            continue;
        }
        let name = &m.lp.names[j];
        match (&b.lower, &b.upper) {
            (None, None) => {
                let _ = writeln!(out, " {name} free");
            }
            (Some(l), None) if l.is_zero() => {}
            (l, u) => {
                let lo = l.as_ref().map_or("-inf".into(), to_lp_number);
                let hi = u.as_ref().map_or("+inf".into(), to_lp_number);
                let _ = writeln!(out, " {lo} <= {name} <= {hi}");
            }
        }
    }
    out.push_str("Binary\n");
    let mut line = String::new();
    for &j in &m.binaries {
        if line.len() + m.lp.names[j].len() + 1 > WRAP {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        line.push(' ');
        line.push_str(&m.lp.names[j]);
    }
    if !line.is_empty() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

fn to_lp_number(v: &Rational) -> String {
    // Bounds in these models are always 0 or 1.
    exact_decimal(v).unwrap_or_else(|| to_text(v))
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::LpFormat { line, reason: reason.into() }
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    Head,
    Objective,
    Constraints,
    Bounds,
    Binary,
    Done,
}

struct Vars {
    index: HashMap<String, usize>,
    names: Vec<String>,
}

impl Vars {
    fn get(&mut self, name: &str) -> usize {
        if let Some(&j) = self.index.get(name) {
            return j;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }
}

type Terms = Vec<(usize, Rational)>;

/// Parses `[sign] [coef] name ...` until the tokens run out.
fn parse_terms(tokens: &[&str], vars: &mut Vars, line: usize) -> Result<Terms> {
    let mut out = Vec::new();
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    for &t in tokens {
        match t {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                if let Some(v) = parse_rational(t) {
                    if coef.is_some() {
                        return Err(perr(line, format!("two coefficients in a row near `{t}`")));
                    }
                    coef = Some(v);
                } else {
                    let c = coef.take().unwrap_or_else(Rational::one) * &sign;
                    out.push((vars.get(t), c));
                    sign = Rational::one();
                }
            }
        }
    }
    if coef.is_some() {
        return Err(perr(line, "dangling coefficient"));
    }
    Ok(out)
}

/// Reads a model written by [`write_lp`] (or any LP file using the same names).
pub fn parse_lp(text: &str) -> Result<MipModel> {
    let mut section = Section::Head;
    let mut vars = Vars { index: HashMap::new(), names: Vec::new() };
    let mut sense = Sense::Min;
    let mut objective: Terms = Vec::new();
    let mut rows: Vec<(String, Terms, Relation, Rational)> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    let mut binaries: Vec<usize> = Vec::new();
    let mut problem: Option<Problem> = None;
    let mut pairs: Vec<DualCandidate> = Vec::new();
    let mut alphas: Vec<Rational> = Vec::new();
    let mut pending: Vec<String> = Vec::new();

    let mut at = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        at = lineno + 1;
        let line = raw.trim();
        if let Some(c) = line.strip_prefix('\\') {
            let w: Vec<&str> = c.split_whitespace().collect();
            match w.as_slice() {
                ["problem", p] => problem = Some(p.parse().map_err(|_| perr(at, format!("unknown problem `{p}`")))?),
                ["block", _, "alpha", a, "beta", b] => {
                    let a = parse_rational(a).ok_or_else(|| perr(at, "bad alpha"))?;
                    let b = parse_rational(b).ok_or_else(|| perr(at, "bad beta"))?;
                    pairs.push(DualCandidate::new(a, b));
                }
                ["block", _, "alpha", a] => alphas.push(parse_rational(a).ok_or_else(|| perr(at, "bad alpha"))?),
                _ => {}
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let next = match lower.as_str() {
            "minimize" | "minimum" | "min" => {
                sense = Sense::Min;
                Some(Section::Objective)
            }
            "maximize" | "maximum" | "max" => {
                sense = Sense::Max;
                Some(Section::Objective)
            }
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binary" | "binaries" | "bin" => Some(Section::Binary),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Objective => {
                let body: Vec<&str> = tokens.iter().copied().filter(|t| !t.ends_with(':')).collect();
                objective.extend(parse_terms(&body, &mut vars, at)?);
            }
            Section::Constraints => {
                pending.extend(tokens.iter().map(|s| s.to_string()));
                // A row is complete once a relation and its right-hand side are present.
                let rel_at = pending.iter().position(|t| matches!(t.as_str(), "<=" | "=<" | ">=" | "=>" | "="));
                if let Some(p) = rel_at {
                    if pending.len() > p + 1 {
                        if pending.len() > p + 2 {
                            return Err(perr(at, format!("trailing tokens after row `{}`", pending.join(" "))));
                        }
                        let name = pending[0]
                            .strip_suffix(':')
                            .ok_or_else(|| perr(at, format!("unnamed row `{}`", pending.join(" "))))?
                            .to_string();
                        let body: Vec<&str> = pending[1..p].iter().map(|s| s.as_str()).collect();
                        let terms = parse_terms(&body, &mut vars, at)?;
                        let rel = match pending[p].as_str() {
                            "<=" | "=<" => Relation::Le,
                            ">=" | "=>" => Relation::Ge,
                            _ => Relation::Eq,
                        };
                        let rhs = parse_rational(&pending[p + 1]).ok_or_else(|| perr(at, format!("bad rhs `{}`", pending[p + 1])))?;
                        rows.push((name, terms, rel, rhs));
                        pending.clear();
                    }
                }
            }
            Section::Bounds => match tokens.as_slice() {
                [name, f] if f.eq_ignore_ascii_case("free") => free.push(vars.get(name)),
                _ => return Err(perr(at, format!("unsupported bound `{line}`"))),
            },
            Section::Binary => {
                for t in tokens {
                    binaries.push(vars.get(t));
                }
            }
            Section::Head | Section::Done => return Err(perr(at, format!("unexpected line `{line}`"))),
        }
    }
    if !pending.is_empty() {
        return Err(perr(at, "unterminated row"));
    }
    if section != Section::Done {
        return Err(perr(at, "missing End"));
    }

    let nv = vars.names.len();
    let mut lp = LpModel::new(sense);
    for name in &vars.names {
        lp.add_var(name.clone(), Bound::nonneg(), Rational::zero());
    }
    for (j, c) in objective {
        lp.objective[j] += c;
    }
    for &j in &free {
        lp.bounds[j] = Bound::free();
    }
    for &j in &binaries {
        lp.bounds[j] = Bound::unit();
    }
    let mut row_names = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    for (name, terms, rel, rhs) in rows {
        row_index.insert(name.clone(), row_names.len());
        row_names.push(name);
        lp.add_row(&terms, rel, rhs);
    }
    debug_assert_eq!(lp.var_count(), nv);

    let var = |name: &str| vars.index.get(name).copied().ok_or_else(|| perr(at, format!("missing variable `{name}`")));
    let row = |name: &str| row_index.get(name).copied().ok_or_else(|| perr(at, format!("missing row `{name}`")));
    let lambda = var("lambda")?;
    let n = (1..).take_while(|i| vars.index.contains_key(&format!("x_{i}"))).count();
    let x: Vec<usize> = (1..=n).map(|i| var(&format!("x_{i}"))).collect::<Result<_>>()?;
    let card = row("card")?;
    let mut blocks = Vec::new();
    for l in 1.. {
        let Some(&pi) = vars.index.get(&format!("pi_{l}")) else { break };
        let rho = (1..=n).map(|i| var(&format!("rho_{l}_{i}"))).collect::<Result<_>>()?;
        let caps = (1..=n).map(|i| row(&format!("cap_{l}_{i}"))).collect::<Result<_>>()?;
        blocks.push(MipBlock { pi, rho, cut: row(&format!("cut_{l}"))?, caps });
    }
    let problem = match problem {
        Some(p) => p,
        None if lp.rows[card].relation == Relation::Eq => Problem::Rrec,
        None => Problem::R2st,
    };
    Ok(MipModel { problem, lp, row_names, lambda, x, binaries, card, blocks, pairs, alphas })
}
