//! Line-oriented text format for polynomial systems.
//!
//! ```text
//! # cyclodiff-system v1 m=4 level=g theta=0
//! vars: g0 g1 g2 g3 h
//! poly: 1*g1^1*g3^1 + 1
//! ```
//!
//! Terms are written as a positive coefficient followed by `*var^exp` factors
//! in declared variable order, terms in descending degree-lex order. Only the
//! first term may carry a leading `-`. Planar systems append ` planar=<q>` to
//! the header.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{Level, PolySystem, SYSTEM_ORDER};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};

const MAGIC: &str = "# cyclodiff-system v1";

pub fn export_system(sys: &PolySystem) -> String {
    let mut out = String::new();
    write!(out, "{MAGIC} m={} level={} theta={}", sys.m, sys.level.tag(), sys.theta).unwrap();
    if let Some(q) = sys.planar_q {
        write!(out, " planar={q}").unwrap();
    }
    out.push('\n');
    writeln!(out, "vars: {}", sys.vars.join(" ")).unwrap();
    for p in &sys.polys {
        out.push_str("poly:");
        let p = p.with_order(SYSTEM_ORDER);
        if p.is_zero() {
            out.push_str(" 0");
        }
        for (k, (mono, c)) in p.terms().iter().enumerate() {
            let sign = match (k, c.is_negative()) {
                (0, true) => " -",
                (0, false) => " ",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            out.push_str(sign);
            write!(out, "{}", c.abs()).unwrap();
            for (i, e) in mono.support() {
                write!(out, "*{}^{e}", sys.vars[i]).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(format!("line {line}: {}", msg.into()))
}

fn parse_term(tok: &str, vars: &[String], line: usize) -> Result<(Monomial, BigInt)> {
    let mut parts = tok.split('*');
    let coeff: BigInt = parts
        .next()
        .unwrap_or("")
        .parse()
        .map_err(|_| perr(line, format!("bad coefficient in `{tok}`")))?;
    if coeff.is_negative() {
        return Err(perr(line, format!("coefficient must be unsigned in `{tok}`")));
    }
    let mut exps = vec![0u32; vars.len()];
    let mut last: Option<usize> = None;
    for factor in parts {
        let (name, e) = factor
            .split_once('^')
            .ok_or_else(|| perr(line, format!("factor `{factor}` lacks an exponent")))?;
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| perr(line, format!("unknown variable `{name}`")))?;
        if last.is_some_and(|l| l >= i) {
            return Err(perr(line, format!("variables out of order in `{tok}`")));
        }
        last = Some(i);
        let e: u32 = e
            .parse()
            .ok()
            .filter(|&e| e >= 1 && e <= u8::MAX as u32)
            .ok_or_else(|| perr(line, format!("bad exponent in `{factor}`")))?;
        exps[i] = e;
    }
    Ok((Monomial::from_exps(&exps), coeff))
}

fn parse_poly(body: &str, vars: &[String], line: usize) -> Result<Poly> {
    let mut toks = body.split_whitespace().peekable();
    let mut terms = Vec::new();
    let mut sign = BigInt::one();
    let first = toks.next().ok_or_else(|| perr(line, "empty polynomial"))?;
    let first = match first.strip_prefix('-') {
        Some(rest) if !rest.is_empty() => {
            sign = -sign;
            rest
        }
        Some(_) => return Err(perr(line, "dangling sign")),
        None => first,
    };
    let (mono, c) = parse_term(first, vars, line)?;
    terms.push((mono, c * &sign));
    while let Some(op) = toks.next() {
        let sign = match op {
            "+" => BigInt::one(),
            "-" => -BigInt::one(),
            other => return Err(perr(line, format!("expected + or -, found `{other}`"))),
        };
        let tok = toks.next().ok_or_else(|| perr(line, "dangling operator"))?;
        let (mono, c) = parse_term(tok, vars, line)?;
        terms.push((mono, c * sign));
    }
    Ok(Poly::from_terms(SYSTEM_ORDER, terms))
}

pub fn parse_system(text: &str) -> Result<PolySystem> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let rest = header
        .strip_prefix(MAGIC)
        .ok_or_else(|| perr(1, "missing `# cyclodiff-system v1` header"))?;
    let (mut m, mut level, mut theta, mut planar) = (None, None, None, None);
    for kv in rest.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| perr(1, format!("bad header field `{kv}`")))?;
        let num = || v.parse::<u64>().map_err(|_| perr(1, format!("bad number in `{kv}`")));
        match k {
            "m" => m = Some(num()?),
            "theta" => theta = Some(num()?),
            "planar" => planar = Some(num()?),
            "level" => {
                level = Some(match v {
                    "g" => Level::G,
                    "ghat" => Level::Ghat,
                    _ => return Err(perr(1, format!("unknown level `{v}`"))),
                })
            }
            _ => return Err(perr(1, format!("unknown header field `{k}`"))),
        }
    }
    let m = m.ok_or_else(|| perr(1, "header lacks m"))?;
    let level = level.ok_or_else(|| perr(1, "header lacks level"))?;
    let (ln, vars_line) = lines.next().ok_or_else(|| perr(2, "missing vars line"))?;
    let vars: Vec<String> = vars_line
        .strip_prefix("vars:")
        .ok_or_else(|| perr(ln, "expected `vars:`"))?
        .split_whitespace()
        .map(String::from)
        .collect();
    if vars.is_empty() || vars.len() > crate::poly::MAX_VARS {
        return Err(perr(ln, "variable count out of range"));
    }
    let mut polys = Vec::new();
    for (ln, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let body = l
            .strip_prefix("poly:")
            .ok_or_else(|| perr(ln, "expected `poly:`"))?;
        polys.push(parse_poly(body, &vars, ln)?);
    }
    Ok(PolySystem {
        m,
        level,
        theta: theta.unwrap_or(0),
        planar_q: planar,
        vars,
        polys,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::{gen_g_system, gen_ghat_system, planar_system};

    #[test]
    fn round_trip() {
        for sys in [
            gen_g_system(4).unwrap(),
            gen_g_system(10).unwrap(),
            gen_ghat_system(6, 1).unwrap(),
            planar_system(8).unwrap(),
        ] {
            let text = export_system(&sys);
            let back = parse_system(&text).unwrap();
            assert_eq!(back, sys);
            assert_eq!(export_system(&back), text);
        }
    }

    #[test]
    fn format_details() {
        let text = export_system(&gen_g_system(4).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# cyclodiff-system v1 m=4 level=g theta=0");
        assert_eq!(lines[1], "vars: g0 g1 g2 g3 h");
        assert!(lines.contains(&"poly: 1*g2^2 - 1"));
        assert!(lines.contains(&"poly: 1*h^2 - 1"));
    }

    #[test]
    fn rejects_malformed() {
        let head = "# cyclodiff-system v1 m=4 level=g theta=0\nvars: x y\n";
        for bad in [
            "poly: 1*z^1",
            "poly: 1*x",
            "poly: 1*y^1*x^1",
            "poly: 1 +",
            "poly: 1 * 2",
            "poly: -",
            "poly: 2*x^0",
        ] {
            assert!(parse_system(&format!("{head}{bad}\n")).is_err(), "{bad}");
        }
        let ok = parse_system(&format!("{head}poly: -3*x^1*y^2 + 2\n")).unwrap();
        assert_eq!(ok.polys[0].len(), 2);
        assert!(parse_system("garbage").is_err());
    }
}
