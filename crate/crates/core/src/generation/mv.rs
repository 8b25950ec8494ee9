use std::collections::BTreeMap;

use crate::matroid::{choose2, MultiplicityVector};
use crate::poly::characteristic_data;

/// All multiplicity vectors on n atoms with at least n blocks, optionally
/// restricted to integrally splitting ones. Ordered lexicographically
/// descending on (m_{n−1}, …, m₂).
pub fn enumerate_multiplicity_vectors(n: usize, require_int_split: bool) -> Vec<MultiplicityVector> {
    assert!(n >= 3, "need at least 3 atoms");
    let mut out = Vec::new();
    let mut m = BTreeMap::new();
    rec(n, n - 1, choose2(n), 0, &mut m, &mut out, require_int_split);
    out
}

fn rec(
    n: usize,
    k: usize,
    pairs_left: usize,
    blocks: usize,
    m: &mut BTreeMap<usize, usize>,
    out: &mut Vec<MultiplicityVector>,
    int_split: bool,
) {
    if k == 2 {
        let total = blocks + pairs_left;
        if total < n {
            return;
        }
        m.insert(2, pairs_left);
        let mv = MultiplicityVector::new(n, m.clone()).expect("coverage identity holds by construction");
        m.remove(&2);
        if !int_split || characteristic_data(&mv).split.is_some() {
            out.push(mv);
        }
        return;
    }
    let per = choose2(k);
    for c in (0..=pairs_left / per).rev() {
        if c > 0 {
            m.insert(k, c);
        }
        rec(n, k - 1, pairs_left - c * per, blocks + c, m, out, int_split);
        m.remove(&k);
    }
}
