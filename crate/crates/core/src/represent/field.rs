//! Finite fields of order at most 256 by table lookup.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("field order {0} exceeds 256")]
    TooLarge(usize),
}

/// GF(q) with q = pᵉ. Elements are 0..q; element x stands for the polynomial
/// whose base-p digits are the coefficients, so 0..p is the prime field.
#[derive(Clone)]
pub struct FieldSpec {
    p: usize,
    e: usize,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for FieldSpec {}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn digits(x: usize, p: usize, e: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(e);
    let mut x = x;
    for _ in 0..e {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(v: &[usize], p: usize) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies by x modulo the monic polynomial xᵉ + Σ low[i]xⁱ.
fn times_x(v: &[usize], low: &[usize], p: usize) -> Vec<usize> {
    let e = v.len();
    let top = v[e - 1];
    let mut out = vec![0; e];
    for i in (1..e).rev() {
        out[i] = v[i - 1];
    }
    for i in 0..e {
        out[i] = (out[i] + p * p - top * low[i] % p) % p;
    }
    out
}

impl FieldSpec {
    pub fn new(q: usize) -> Result<FieldSpec, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > 256 {
            return Err(FieldError::TooLarge(q));
        }
        let add = (0..q * q)
            .map(|i| {
                let (a, b) = (digits(i / q, p, e), digits(i % q, p, e));
                let s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
                undigits(&s, p) as u8
            })
            .collect::<Vec<u8>>();
        let exp = primitive_powers(p, e);
        let mut log = vec![0usize; q];
        for (i, &x) in exp.iter().enumerate() {
            log[x] = i;
        }
        let mut mul = vec![0u8; q * q];
        for a in 1..q {
            for b in 1..q {
                mul[a * q + b] = exp[(log[a] + log[b]) % (q - 1)] as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = exp[(q - 1 - log[a]) % (q - 1)] as u8;
            }
        }
        Ok(FieldSpec { p, e, q, add, mul, neg, inv })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Panics on zero.
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    pub fn det3(&self, a: [u8; 3], b: [u8; 3], c: [u8; 3]) -> u8 {
        let m = |x, y| self.mul(x, y);
        let t0 = m(a[0], self.sub(m(b[1], c[2]), m(b[2], c[1])));
        let t1 = m(a[1], self.sub(m(b[0], c[2]), m(b[2], c[0])));
        let t2 = m(a[2], self.sub(m(b[0], c[1]), m(b[1], c[0])));
        self.add(self.sub(t0, t1), t2)
    }
}

/// Powers of x modulo the first monic polynomial of degree e in which x has
/// order pᵉ − 1. Such a polynomial is irreducible, since then every nonzero
/// residue is a unit.
fn primitive_powers(p: usize, e: usize) -> Vec<usize> {
    let q = p.pow(e as u32);
    if e == 1 {
        let g = (1..p)
            .find(|&g| {
                let mut x = 1;
                (1..p - 1).all(|_| {
                    x = x * g % p;
                    x != 1
                })
            })
            .unwrap_or(1);
        let mut out = Vec::with_capacity(p - 1);
        let mut x = 1;
        for _ in 0..p - 1 {
            out.push(x);
            x = x * g % p;
        }
        return out;
    }
    'poly: for code in 0..q {
        let low = digits(code, p, e);
        if low[0] == 0 {
            continue;
        }
        let mut seen = vec![false; q];
        let mut out = Vec::with_capacity(q - 1);
        let mut v = digits(1, p, e);
        for _ in 0..q - 1 {
            let x = undigits(&v, p);
            if x == 0 || seen[x] {
                continue 'poly;
            }
            seen[x] = true;
            out.push(x);
            v = times_x(&v, &low, p);
        }
        if undigits(&v, p) == 1 {
            return out;
        }
    }
    unreachable!("a primitive polynomial exists for every prime power")
}

/// The prime powers up to 13.
pub fn default_battery() -> Vec<FieldSpec> {
    [2, 3, 4, 5, 7, 8, 9, 11, 13]
        .iter()
        .map(|&q| FieldSpec::new(q).unwrap())
        .collect()
}

/// Parses a comma-separated list of field orders.
pub fn parse_battery(s: &str) -> Result<Vec<FieldSpec>, FieldError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| FieldError::NotPrimePower(0)).and_then(FieldSpec::new))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold_for_small_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49] {
            let f = FieldSpec::new(q).unwrap();
            for a in 0..q as u8 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                }
                for b in 0..q as u8 {
                    for c in 0..q as u8 {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(FieldSpec::new(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(FieldSpec::new(1).unwrap_err(), FieldError::NotPrimePower(1));
        assert!(FieldSpec::new(256).is_ok());
        assert_eq!(FieldSpec::new(512).unwrap_err(), FieldError::TooLarge(512));
    }
}
