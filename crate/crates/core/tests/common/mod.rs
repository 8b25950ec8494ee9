#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rank3::permgroup::{apply, Permutation};
use rank3::{make_matroid, Block, TwoPartition};

pub fn lists(blocks: &[Block]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.to_vec()).collect()
}

pub fn boolean3() -> TwoPartition {
    make_matroid(3, [vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
}

pub fn braid() -> TwoPartition {
    make_matroid(
        6,
        [vec![1, 2, 4], vec![1, 3, 5], vec![2, 3, 6], vec![4, 5, 6], vec![3, 4], vec![2, 5], vec![1, 6]],
    )
    .unwrap()
}

pub fn fano() -> TwoPartition {
    make_matroid(
        7,
        [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [1, 5, 6], [2, 6, 7], [1, 3, 7]],
    )
    .unwrap()
}

pub fn near_pencil5() -> TwoPartition {
    make_matroid(5, [vec![1, 2, 3, 4], vec![1, 5], vec![2, 5], vec![3, 5], vec![4, 5]]).unwrap()
}

pub fn m1() -> TwoPartition {
    make_matroid(
        11,
        [
            vec![1, 2, 3, 4],
            vec![1, 5, 6, 7],
            vec![1, 8, 9, 10],
            vec![2, 5, 8, 11],
            vec![3, 6, 9, 11],
            vec![2, 6, 10],
            vec![2, 7, 9],
            vec![3, 5, 10],
            vec![4, 5, 9],
            vec![4, 7, 11],
            vec![1, 11],
            vec![3, 7],
            vec![3, 8],
            vec![4, 6],
            vec![4, 8],
            vec![4, 10],
            vec![6, 8],
            vec![7, 8],
            vec![7, 10],
            vec![10, 11],
        ],
    )
    .unwrap()
}

pub fn m2() -> TwoPartition {
    make_matroid(
        11,
        [
            vec![1, 2, 3, 4],
            vec![1, 5, 6, 7],
            vec![2, 5, 8, 9],
            vec![3, 6, 8, 10],
            vec![4, 7, 9, 10],
            vec![1, 8, 11],
            vec![2, 7, 11],
            vec![3, 9, 11],
            vec![4, 6, 11],
            vec![5, 10, 11],
            vec![1, 9],
            vec![1, 10],
            vec![2, 6],
            vec![2, 10],
            vec![3, 5],
            vec![3, 7],
            vec![4, 5],
            vec![4, 8],
            vec![6, 9],
            vec![7, 8],
        ],
    )
    .unwrap()
}

/// Integer 3×3 determinant modulo p, independent of the library's fields.
pub fn det_mod(c: [[i64; 3]; 3], p: i64) -> i64 {
    let [a, b, d] = c;
    let v = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) + a[2] * (b[0] * d[1] - b[1] * d[0]);
    v.rem_euclid(p)
}

/// Lines of the point configuration given by the columns, modulo p.
pub fn matroid_of_columns(cols: &[[i64; 3]], p: i64) -> TwoPartition {
    let n = cols.len();
    let mut lines = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let line: Vec<usize> = (0..n)
                .filter(|&k| k == i || k == j || det_mod([cols[i], cols[j], cols[k]], p) == 0)
                .map(|k| k + 1)
                .collect();
            lines.insert(line);
        }
    }
    make_matroid(n, lines).unwrap()
}

/// Columns of the printed 14-atom matrix with parameter `a`, modulo p.
pub fn example_14_columns(a: i64, p: i64) -> Vec<[i64; 3]> {
    let r1: [i64; 14] = [1, 0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1];
    let r2 = [0, 1, 1, 2 * a - 1, 2 * a, 0, 0, 0, 0, 1, -2 * a + 2, 1, 1, 1];
    let r3 = [0, 0, 0, 0, 0, 1, 1, -2 * a + 1, -a + 1, a, 1, a, 2 * a - 1, 1];
    (0..14)
        .map(|k| [r1[k].rem_euclid(p), r2[k].rem_euclid(p), r3[k].rem_euclid(p)])
        .collect()
}

/// The 14-atom matroid, read off the matrix at a = 3 over GF(13).
pub fn example_14() -> TwoPartition {
    matroid_of_columns(&example_14_columns(3, 13), 13)
}

/// Every labeled proper 2-partition of 1..=n, by covering the smallest
/// uncovered pair with each possible block.
pub fn brute_force_partitions(n: usize) -> Vec<Vec<Block>> {
    fn rec(n: usize, covered: &mut Vec<Vec<bool>>, blocks: &mut Vec<Block>, out: &mut Vec<Vec<Block>>) {
        let next = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).find(|&(a, b)| !covered[a][b]);
        let Some((a, b)) = next else {
            out.push(blocks.clone());
            return;
        };
        let free: Vec<usize> = (b + 1..=n).filter(|&c| !covered[a][c] && !covered[b][c]).collect();
        for size in 0..=free.len() {
            for extra in free.iter().copied().combinations(size) {
                if size + 2 == n {
                    continue;
                }
                if extra.iter().tuple_combinations().any(|(&x, &y)| covered[x][y]) {
                    continue;
                }
                let mut atoms = vec![a, b];
                atoms.extend(extra);
                for (&x, &y) in atoms.iter().tuple_combinations() {
                    covered[x][y] = true;
                    covered[y][x] = true;
                }
                blocks.push(Block::from_atoms(atoms.iter().copied()));
                rec(n, covered, blocks, out);
                blocks.pop();
                for (&x, &y) in atoms.iter().tuple_combinations() {
                    covered[x][y] = false;
                    covered[y][x] = false;
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut vec![vec![false; n + 1]; n + 1], &mut Vec::new(), &mut out);
    out
}

pub fn all_permutations(n: usize) -> Vec<Permutation> {
    (1..=n)
        .permutations(n)
        .map(|imgs| Permutation::from_images(&imgs).unwrap())
        .collect()
}

/// Smallest image over an explicit element list, comparing flattened lists.
pub fn orbit_minimum(elements: &[Permutation], a: &[Block]) -> Vec<Vec<usize>> {
    elements
        .iter()
        .map(|g| lists(&apply(g, a)))
        .min_by(|x, y| x.concat().cmp(&y.concat()).then_with(|| x.cmp(y)))
        .unwrap()
}

/// Closure of a generating set by breadth-first multiplication.
pub fn closure(n: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let id = Permutation::identity(n);
    seen.insert(id.images());
    let mut queue = vec![id];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i].clone();
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.images()) {
                queue.push(y);
            }
        }
        i += 1;
    }
    queue
}

/// Isomorphism classes of labeled 2-partitions on 1..=n, each as its
/// flat-lexicographic orbit minimum. A class is swept by applying all n!
/// permutations to the first member met during raw backtracking.
pub fn brute_force_classes(n: usize) -> Vec<Vec<Block>> {
    let perms: Vec<Vec<u8>> = (0..n as u8).permutations(n).collect();
    let image = |p: &[u8], a: &[Block]| -> Vec<Block> {
        let mut out: Vec<Block> = a
            .iter()
            .map(|b| Block(b.atoms().fold(0u32, |m, x| m | 1 << p[x - 1])))
            .collect();
        rank3::block::normalize(&mut out);
        out
    };
    let flat = |a: &[Block]| -> Vec<usize> { a.iter().flat_map(|b| b.atoms()).collect() };
    let mut seen: HashSet<Vec<Block>> = HashSet::new();
    let mut classes = Vec::new();
    for a in brute_force_partitions(n) {
        let a = rank3::block::normalized(a);
        if seen.contains(&a) {
            continue;
        }
        let mut best: Option<(Vec<usize>, Vec<Block>)> = None;
        for p in &perms {
            let b = image(p, &a);
            let f = flat(&b);
            if best.as_ref().map_or(true, |(bf, _)| f < *bf) {
                best = Some((f, b.clone()));
            }
            seen.insert(b);
        }
        classes.push(best.unwrap().1);
    }
    classes
}
