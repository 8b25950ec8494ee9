use std::sync::OnceLock;

use num_bigint::BigUint;

use super::perm::{PermError, Permutation};

/// Level i of the stabilizer chain: the pointwise stabilizer of base points
/// 0..i, its strong generators, and a transversal for the orbit of point i.
#[derive(Clone)]
struct Level {
    gens: Vec<Permutation>,
    /// `trans[d]` maps point i to d, for d in the orbit.
    trans: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn trivial(n: usize, i: usize) -> Level {
        let mut trans = vec![None; n];
        trans[i] = Some(Permutation::identity(n));
        Level {
            gens: Vec::new(),
            trans,
            orbit: vec![i],
        }
    }

    fn rebuild_orbit(&mut self, n: usize, base: usize) {
        let mut trans: Vec<Option<Permutation>> = vec![None; n];
        trans[base] = Some(Permutation::identity(n));
        let mut orbit = vec![base];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in &self.gens {
                let y = g.at(x);
                if trans[y].is_none() {
                    trans[y] = Some(g.compose(trans[x].as_ref().unwrap()));
                    orbit.push(y);
                }
            }
            k += 1;
        }
        self.trans = trans;
        self.orbit = orbit;
    }
}

/// A permutation group with a stabilizer chain on the base 1, 2, …, n.
#[derive(Clone)]
pub struct PermGroup {
    n: usize,
    gens: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
    symmetric: bool,
    /// `transpositions[v]`: atoms u (0-based bits) with (u v) in the group.
    transpositions: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens {:?})", self.n, self.order, self.gens)
    }
}

/// Deterministic Schreier–Sims. Generators are processed in input order.
pub fn group_from_generators(n: usize, gens: &[Permutation]) -> Result<PermGroup, PermError> {
    for g in gens {
        if g.degree() != n {
            return Err(PermError::DegreeMismatch {
                got: g.degree(),
                want: n,
            });
        }
    }
    let mut levels: Vec<Level> = (0..n).map(|i| Level::trivial(n, i)).collect();
    let kept: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    if n > 0 {
        levels[0].gens = kept.clone();
        levels[0].rebuild_orbit(n, 0);
        // Each nontrivial generator also belongs to the levels whose base
        // points it fixes.
        for g in &kept {
            let first_moved = (0..n).find(|&i| g.at(i) != i).unwrap();
            for (l, level) in levels.iter_mut().enumerate().take(first_moved + 1).skip(1) {
                level.gens.push(g.clone());
                level.rebuild_orbit(n, l);
            }
        }
    }
    schreier_sims(n, &mut levels);
    Ok(PermGroup::from_levels(n, gens.to_vec(), levels, false))
}

/// Sifts `g` through levels `from..`; returns the residue and the level where
/// it dropped out (`n` if it sifted through).
fn strip(levels: &[Level], n: usize, mut g: Permutation, from: usize) -> (Permutation, usize) {
    for (i, level) in levels.iter().enumerate().skip(from) {
        let d = g.at(i);
        match &level.trans[d] {
            None => return (g, i),
            Some(u) => g = u.inverse().compose(&g),
        }
    }
    (g, n)
}

fn schreier_sims(n: usize, levels: &mut [Level]) {
    let mut i = n as isize - 1;
    'outer: while i >= 0 {
        let l = i as usize;
        let orbit = levels[l].orbit.clone();
        let gens = levels[l].gens.clone();
        for &d in &orbit {
            let ud = levels[l].trans[d].clone().unwrap();
            for s in &gens {
                let sd = s.at(d);
                let usd = levels[l].trans[sd].as_ref().unwrap();
                let schreier = usd.inverse().compose(&s.compose(&ud));
                let (h, j) = strip(levels, n, schreier, l + 1);
                if j < n {
                    for (k, level) in levels.iter_mut().enumerate().take(j + 1).skip(l + 1) {
                        level.gens.push(h.clone());
                        level.rebuild_orbit(n, k);
                    }
                    i = j as isize;
                    continue 'outer;
                }
                debug_assert!(h.is_identity());
            }
        }
        i -= 1;
    }
}

impl PermGroup {
    fn from_levels(n: usize, gens: Vec<Permutation>, levels: Vec<Level>, symmetric: bool) -> Self {
        let mut order = BigUint::from(1u32);
        for l in &levels {
            order *= BigUint::from(l.orbit.len());
        }
        let mut factorial = BigUint::from(1u32);
        for k in 2..=n {
            factorial *= BigUint::from(k);
        }
        let symmetric = symmetric || order == factorial;
        PermGroup {
            n,
            gens,
            levels,
            order,
            symmetric,
            transpositions: OnceLock::new(),
        }
    }

    pub fn trivial(n: usize) -> PermGroup {
        group_from_generators(n, &[]).unwrap()
    }

    /// Sym(n) with transpositions as transversal elements.
    pub fn symmetric(n: usize) -> PermGroup {
        let mut levels = Vec::with_capacity(n);
        for i in 0..n {
            let mut trans = vec![None; n];
            let mut gens = Vec::new();
            for d in i..n {
                let mut img: Vec<u8> = (0..n as u8).collect();
                img.swap(i, d);
                let t = Permutation::from_raw(img);
                if d > i {
                    gens.push(t.clone());
                }
                trans[d] = Some(t);
            }
            levels.push(Level {
                gens,
                trans,
                orbit: (i..n).collect(),
            });
        }
        let gens = if n >= 2 { levels[0].gens.clone() } else { Vec::new() };
        PermGroup::from_levels(n, gens, levels, true)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && strip(&self.levels, self.n, g.clone(), 0).1 == self.n
    }

    pub(crate) fn transposition_partners(&self) -> &[u32] {
        self.transpositions.get_or_init(|| {
            let n = self.n;
            let mut out = vec![0u32; n];
            if self.symmetric {
                for (v, m) in out.iter_mut().enumerate() {
                    *m = crate::matroid::full_set(n).0 & !(1 << v);
                }
                return out;
            }
            for v in 0..n {
                for u in 0..v {
                    let mut img: Vec<u8> = (0..n as u8).collect();
                    img.swap(u, v);
                    if self.contains(&Permutation::from_raw(img)) {
                        out[v] |= 1 << u;
                        out[u] |= 1 << v;
                    }
                }
            }
            out
        })
    }

    /// Orbit of point i (0-based) under the stabilizer of 0..i.
    pub(crate) fn basic_orbit(&self, i: usize) -> &[usize] {
        &self.levels[i].orbit
    }

    pub(crate) fn transversal(&self, i: usize, d: usize) -> &Permutation {
        self.levels[i].trans[d].as_ref().expect("point in basic orbit")
    }

    /// Orbit lengths along the chain.
    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// All elements, for small groups only.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.n)];
        for i in (0..self.n).rev() {
            let mut next = Vec::with_capacity(out.len() * self.levels[i].orbit.len());
            for &d in &self.levels[i].orbit {
                let u = self.transversal(i, d);
                for g in &out {
                    next.push(u.compose(g));
                }
            }
            out = next;
        }
        out
    }
}
