//! Characteristic and Tutte polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::block::Block;
use crate::matroid::{rank, MultiplicityVector, TwoPartition};

/// χ(t)/(t−1) = t² − (n−1)t + (b₂ − (n−1)) and its integer roots, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharacteristicData {
    pub b2: i64,
    /// Coefficients of t², t¹, t⁰.
    pub quadratic: [i64; 3],
    /// Roots a ≤ b with a + b = n−1 and ab = b₂ − (n−1).
    pub split: Option<(i64, i64)>,
}

impl CharacteristicData {
    pub fn eval(&self, t: i64) -> i64 {
        let [c2, c1, c0] = self.quadratic;
        c2 * t * t + c1 * t + c0
    }

    pub fn is_root(&self, t: i64) -> bool {
        self.eval(t) == 0
    }

    /// (t−1)·q(t) as coefficients of t⁰..t³.
    pub fn cubic(&self) -> [i64; 4] {
        let [c2, c1, c0] = self.quadratic;
        [-c0, c0 - c1, c1 - c2, c2]
    }
}

pub fn characteristic_data(mv: &MultiplicityVector) -> CharacteristicData {
    let n1 = mv.n() as i64 - 1;
    let b2 = mv.b2();
    let c0 = b2 - n1;
    let disc = n1 * n1 - 4 * c0;
    let split = if disc >= 0 {
        let s = (disc as u64).isqrt() as i64;
        (s * s == disc).then(|| ((n1 - s) / 2, (n1 + s) / 2))
    } else {
        None
    };
    CharacteristicData {
        b2,
        quadratic: [1, -n1, c0],
        split,
    }
}

/// Integer polynomial in x and y with nonnegative coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    coeffs: BTreeMap<(u32, u32), u64>,
}

impl BivariatePolynomial {
    pub fn coeff(&self, i: u32, j: u32) -> u64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero terms as (i, j, c) with c the coefficient of xⁱyʲ, in
    /// ascending (i, j).
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.coeffs.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, u64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, j, c) in terms {
            if c != 0 {
                *coeffs.entry((i, j)).or_insert(0) += c;
            }
        }
        BivariatePolynomial { coeffs }
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.terms()
            .map(|(i, j, c)| c as i128 * x.pow(i) * y.pow(j))
            .sum()
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BivariatePolynomial {
    /// Terms by descending total degree, then descending power of y.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        terms.sort_by_key(|&(i, j, _)| std::cmp::Reverse((i + j, j)));
        for (idx, (i, j, c)) in terms.into_iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            if c != 1 || (i == 0 && j == 0) {
                write!(f, "{c}")?;
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => f.write_str(var)?,
                    _ => write!(f, "{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial term {0:?}")]
pub struct PolynomialParseError(pub String);

impl FromStr for BivariatePolynomial {
    type Err = PolynomialParseError;

    /// Accepts sums of terms like `3x^2y`, `y^8`, `16`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        for term in s.split('+') {
            let err = || PolynomialParseError(term.to_string());
            let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mut rest = &term[digits.len()..];
            let c: u64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| err())? };
            let (mut i, mut j) = (0u32, 0u32);
            while let Some(var) = rest.chars().next() {
                rest = &rest[1..];
                let mut e = 1;
                if let Some(r) = rest.strip_prefix('^') {
                    let d: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                    e = d.parse().map_err(|_| err())?;
                    rest = &r[d.len()..];
                }
                match var {
                    'x' => i += e,
                    'y' => j += e,
                    _ => return Err(err()),
                }
            }
            if term.is_empty() {
                return Err(err());
            }
            terms.push((i, j, c));
        }
        Ok(BivariatePolynomial::from_terms(terms))
    }
}

fn binomial_row(k: u32) -> Vec<i64> {
    let mut row = vec![1i64];
    for _ in 0..k {
        let mut next = vec![1i64; row.len() + 1];
        for t in 1..row.len() {
            next[t] = row[t - 1] + row[t];
        }
        row = next;
    }
    row
}

/// Subset-sum expansion of the Tutte polynomial. Needs n ≤ 24.
pub fn tutte(m: &TwoPartition) -> BivariatePolynomial {
    let n = m.n();
    assert!(n <= 24, "exhaustive Tutte expansion needs n ≤ 24");
    // counts[r][s]: subsets of rank r and size s.
    let mut counts = vec![vec![0i64; n + 1]; 4];
    for s in 0u32..(1u32 << n) {
        let r = rank(m, Block(s));
        counts[r][s.count_ones() as usize] += 1;
    }
    let mut acc: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for (r, row) in counts.iter().enumerate() {
        for (size, &cnt) in row.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            // (x−1)^{3−r} (y−1)^{size−r}
            let ex = (3 - r) as u32;
            let ey = (size - r) as u32;
            let bx = binomial_row(ex);
            let by = binomial_row(ey);
            for i in 0..=ex {
                let sx = if (ex - i) % 2 == 0 { 1 } else { -1 };
                for j in 0..=ey {
                    let sy = if (ey - j) % 2 == 0 { 1 } else { -1 };
                    *acc.entry((i, j)).or_insert(0) +=
                        cnt * sx * sy * bx[i as usize] * by[j as usize];
                }
            }
        }
    }
    BivariatePolynomial::from_terms(acc.into_iter().map(|((i, j), c)| {
        assert!(c >= 0, "negative Tutte coefficient");
        (i, j, c as u64)
    }))
}

/// χ(t) = −T(1−t, 0) as coefficients of t⁰..t³.
pub fn char_poly_via_tutte(m: &TwoPartition) -> [i64; 4] {
    char_poly_from_tutte(&tutte(m))
}

pub fn char_poly_from_tutte(t: &BivariatePolynomial) -> [i64; 4] {
    let mut out = [0i64; 4];
    for (i, j, c) in t.terms() {
        if j != 0 {
            continue;
        }
        // −c·(1−t)^i
        let row = binomial_row(i);
        for (k, b) in row.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out[k] -= c as i64 * sign * b;
        }
    }
    out
}
