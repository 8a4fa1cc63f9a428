//! Known families of cyclotomic and modified cyclotomic difference sets.

use std::fmt;

use serde::Serialize;

use crate::arith;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "paley_quadratic")]
    PaleyQuadratic,
    #[serde(rename = "chowla_quartic")]
    ChowlaQuartic,
    #[serde(rename = "lehmer_octic")]
    LehmerOctic,
    #[serde(rename = "modified_quartic")]
    ModifiedQuartic,
    #[serde(rename = "modified_octic")]
    ModifiedOctic,
    #[serde(rename = "M16_3")]
    M16_3,
    #[serde(rename = "unexplained")]
    Unexplained,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::PaleyQuadratic => "paley_quadratic",
            Family::ChowlaQuartic => "chowla_quartic",
            Family::LehmerOctic => "lehmer_octic",
            Family::ModifiedQuartic => "modified_quartic",
            Family::ModifiedOctic => "modified_octic",
            Family::M16_3 => "M16_3",
            Family::Unexplained => "unexplained",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Nonnegative `t` with `n = t^2`.
fn square_root(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    arith::is_square(n as u64).map(|r| r as i64)
}

/// `t >= 0` with `p = a + b t^2`.
fn solve_square(p: i64, a: i64, b: i64) -> Option<i64> {
    let rest = p - a;
    if rest < 0 || rest % b != 0 {
        return None;
    }
    square_root(rest / b)
}

/// The family whose defining conditions `(q, m, modified)` satisfies, if any.
pub fn known_family_match(q: u64, m: u64, modified: bool) -> Option<Family> {
    let prime = || arith::is_prime(q);
    let p = q as i64;
    let odd = |t: i64| t % 2 != 0;
    let even = |t: i64| t % 2 == 0;
    match (m, modified) {
        (2, _) if q % 4 == 3 => Some(Family::PaleyQuadratic),
        (3, true) if q == 16 => Some(Family::M16_3),
        (4, false) if prime() => solve_square(p, 1, 4)
            .filter(|&t| odd(t))
            .map(|_| Family::ChowlaQuartic),
        (4, true) if prime() => solve_square(p, 9, 4)
            .filter(|&t| odd(t))
            .map(|_| Family::ModifiedQuartic),
        (8, false) if prime() => {
            let u = solve_square(p, 1, 8)?;
            let v = solve_square(p, 9, 64)?;
            (odd(u) && odd(v)).then_some(Family::LehmerOctic)
        }
        (8, true) if prime() => {
            let u = solve_square(p, 49, 8)?;
            let v = solve_square(p, 441, 64)?;
            (odd(u) && even(v)).then_some(Family::ModifiedOctic)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(known_family_match(37, 4, false), Some(Family::ChowlaQuartic));
        assert_eq!(known_family_match(73, 8, false), Some(Family::LehmerOctic));
        assert_eq!(known_family_match(16, 3, true), Some(Family::M16_3));
        assert_eq!(known_family_match(7, 2, false), Some(Family::PaleyQuadratic));
        assert_eq!(known_family_match(13, 4, true), Some(Family::ModifiedQuartic));
        assert_eq!(known_family_match(29, 4, false), None);
        assert_eq!(known_family_match(17, 4, false), None);
        assert_eq!(known_family_match(13, 2, false), None);
        assert_eq!(known_family_match(16, 3, false), None);
    }

    #[test]
    fn octic_hits_below_two_million() {
        let scan = |modified| -> Vec<u64> {
            (2..2_000_000u64)
                .filter(|&q| known_family_match(q, 8, modified).is_some())
                .collect()
        };
        assert_eq!(scan(false), vec![73]);
        assert_eq!(scan(true), vec![26041]);
    }
}
