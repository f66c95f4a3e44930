//! Canonical text syntax for polynomials.
//!
//! A polynomial is a sum of terms such as `-3/2*x0^2*Y1_0 + W - 1`. Terms are
//! written in descending order for a chosen term order, a coefficient is
//! printed as `p/q` (or `p`) unless it is `±1` on a non-constant monomial,
//! and exponents of one are omitted. The zero polynomial is `0`.

use num_traits::{One, Signed, Zero};

use super::{Monomial, Polynomial, TermOrder, VarTable};
use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_rat, Rat};

pub fn format_polynomial(p: &Polynomial, vars: &VarTable, order: &TermOrder) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Monomial, &Rat)> = p.terms().collect();
    terms.sort_by(|a, b| order.cmp(b.0, a.0));
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mono = format_monomial(m, vars);
        if mono.is_empty() {
            out.push_str(&format_rat(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rat(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

fn format_monomial(m: &Monomial, vars: &VarTable) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            _ => parts.push(format!("{}^{e}", vars.name(i))),
        }
    }
    parts.join("*")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Star,
    Caret,
    Plus,
    Minus,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '0'..='9' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => return Err(Error::parse_at(text, start, format!("unexpected {other:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

pub fn parse_polynomial(text: &str, vars: &VarTable) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let n = vars.len();
    let mut p = Polynomial::zero(n);
    let mut k = 0;
    let at = |k: usize| toks.get(k).map_or(text.len(), |t| t.0);
    if toks.is_empty() {
        return Err(Error::parse_at(text, 0, "empty polynomial"));
    }
    let mut first = true;
    while k < toks.len() {
        let mut negative = false;
        match &toks[k].1 {
            Tok::Plus if !first => k += 1,
            Tok::Minus => {
                negative = true;
                k += 1;
            }
            _ if first => {}
            _ => return Err(Error::parse_at(text, at(k), "expected '+' or '-'")),
        }
        first = false;
        let mut coeff = Rat::one();
        let mut exps = vec![0u32; n];
        loop {
            match toks.get(k).map(|t| &t.1) {
                Some(Tok::Num(s)) => {
                    coeff *= parse_rat(s).map_err(|_| Error::parse_at(text, at(k), "bad number"))?;
                    k += 1;
                }
                Some(Tok::Ident(name)) => {
                    let v = vars.index(name).ok_or_else(|| {
                        Error::parse_at(text, at(k), format!("unknown variable {name}"))
                    })?;
                    k += 1;
                    let mut e = 1u32;
                    if let Some(Tok::Caret) = toks.get(k).map(|t| &t.1) {
                        k += 1;
                        match toks.get(k).map(|t| &t.1) {
                            Some(Tok::Num(s)) if !s.contains('/') => {
                                e = s.parse().map_err(|_| {
                                    Error::parse_at(text, at(k), "exponent out of range")
                                })?;
                                k += 1;
                            }
                            _ => return Err(Error::parse_at(text, at(k), "expected exponent")),
                        }
                    }
                    exps[v] += e;
                }
                _ => return Err(Error::parse_at(text, at(k), "expected a factor")),
            }
            match toks.get(k).map(|t| &t.1) {
                Some(Tok::Star) => k += 1,
                _ => break,
            }
        }
        if negative {
            coeff = -coeff;
        }
        if !coeff.is_zero() {
            p.add_term(Monomial::from_exponents(exps), coeff);
        }
    }
    Ok(p)
}

/// One polynomial per line; blank lines and lines starting with `#` are
/// skipped. Parse errors report the line of the whole text.
pub fn parse_polynomial_list(text: &str, vars: &VarTable) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_polynomial(line, vars).map_err(|e| match e {
            Error::Parse { column, message, .. } => Error::Parse {
                line: lineno + 1,
                column,
                message,
            },
            other => other,
        })?);
    }
    Ok(out)
}

pub fn format_polynomial_list(ps: &[Polynomial], vars: &VarTable, order: &TermOrder) -> String {
    let mut s = String::new();
    for p in ps {
        s.push_str(&format_polynomial(p, vars, order));
        s.push('\n');
    }
    s
}
