//! Exhaustive backtracking for representations over a finite field.

use super::field::FieldSpec;
use super::pattern::{first_basis, projective_pattern, Entry, RepresentError, RepresentationProblem};
use crate::matroid::TwoPartition;

/// A 3×n matrix over a field, stored by columns; column k−1 belongs to atom k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    pub columns: Vec<[u8; 3]>,
}

impl FieldMatrix {
    pub fn from_rows(rows: [&[u8]; 3]) -> Result<FieldMatrix, RepresentError> {
        let n = rows[0].len();
        for r in &rows[1..] {
            if r.len() != n {
                return Err(RepresentError::DimensionMismatch { got: r.len(), want: n });
            }
        }
        Ok(FieldMatrix {
            columns: (0..n).map(|k| [rows[0][k], rows[1][k], rows[2][k]]).collect(),
        })
    }

    pub fn rows(&self) -> [Vec<u8>; 3] {
        [0, 1, 2].map(|i| self.columns.iter().map(|c| c[i]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(FieldMatrix),
    /// The search space over this field was exhausted.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationResult {
    pub field: usize,
    pub outcome: Outcome,
}

impl RepresentationResult {
    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentabilitySummary {
    pub results: Vec<RepresentationResult>,
    /// Found over at least one field of the battery. Not a decision of
    /// representability over an arbitrary field.
    pub representable_over_battery: bool,
}

/// Every triple inside a block is singular, every other triple is not.
pub fn check_representation(m: &TwoPartition, field: &FieldSpec, a: &FieldMatrix) -> Result<bool, RepresentError> {
    let n = m.n();
    if a.columns.len() != n {
        return Err(RepresentError::DimensionMismatch {
            got: a.columns.len(),
            want: n,
        });
    }
    let q = field.order();
    if a.columns.iter().flatten().any(|&x| x as usize >= q) {
        return Ok(false);
    }
    for i in 0..n {
        for j in i + 1..n {
            let line = m.block_through(i + 1, j + 1);
            for k in j + 1..n {
                let singular = field.det3(a.columns[i], a.columns[j], a.columns[k]) == 0;
                if singular != line.contains(k + 1) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

struct Search<'a> {
    field: &'a FieldSpec,
    /// `line[i][j]`: atoms (0-based bits) on the block through atoms i and j.
    line: Vec<Vec<u32>>,
    pattern: &'a RepresentationProblem,
    order: Vec<usize>,
    placed: Vec<usize>,
    cols: Vec<[u8; 3]>,
}

impl Search<'_> {
    fn consistent(&self, c: usize) -> bool {
        let v = self.cols[c];
        for (x, &a) in self.placed.iter().enumerate() {
            for &b in &self.placed[x + 1..] {
                let singular = self.field.det3(self.cols[a], self.cols[b], v) == 0;
                if singular != (self.line[a][b] >> c & 1 == 1) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> bool {
        let Some(&c) = self.order.get(depth) else {
            return true;
        };
        let pat = self.pattern.columns[c];
        let free: Vec<usize> = (0..3).filter(|&i| pat[i] == Entry::Free).collect();
        let mut base = [0u8; 3];
        for i in 0..3 {
            if pat[i] == Entry::One {
                base[i] = 1;
            }
        }
        let q = self.field.order();
        let choices = (q - 1).pow(free.len() as u32);
        for code in 0..choices {
            let mut v = base;
            let mut rest = code;
            for &i in &free {
                v[i] = (rest % (q - 1) + 1) as u8;
                rest /= q - 1;
            }
            self.cols[c] = v;
            if self.consistent(c) {
                self.placed.push(c);
                if self.run(depth + 1) {
                    return true;
                }
                self.placed.pop();
            }
        }
        false
    }
}

/// Column order: basis first, then repeatedly the column lying on the most
/// lines through two placed columns.
fn column_order(n: usize, basis: [usize; 3], line: &[Vec<u32>]) -> Vec<usize> {
    let mut order: Vec<usize> = basis.iter().map(|b| b - 1).collect();
    let mut placed: u32 = order.iter().fold(0, |m, &c| m | 1 << c);
    while order.len() < n {
        let best = (0..n)
            .filter(|&c| placed >> c & 1 == 0)
            .max_by_key(|&c| {
                let mut hits = 0usize;
                for (x, &a) in order.iter().enumerate() {
                    for &b in &order[x + 1..] {
                        hits += (line[a][b] >> c & 1) as usize;
                    }
                }
                (hits, std::cmp::Reverse(c))
            })
            .unwrap();
        order.push(best);
        placed |= 1 << best;
    }
    order
}

pub fn find_representation_with_basis(
    m: &TwoPartition,
    field: &FieldSpec,
    basis: [usize; 3],
) -> Result<RepresentationResult, RepresentError> {
    let pattern = projective_pattern(m, basis)?;
    let n = m.n();
    let line: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0 } else { m.block_through(i + 1, j + 1).0 })
                .collect()
        })
        .collect();
    let order = column_order(n, basis, &line);
    let mut cols = vec![[0u8; 3]; n];
    for (i, &b) in basis.iter().enumerate() {
        cols[b - 1][i] = 1;
    }
    let mut s = Search {
        field,
        line,
        pattern: &pattern,
        order,
        placed: basis.iter().map(|b| b - 1).collect(),
        cols,
    };
    let outcome = if s.run(3) {
        let found = FieldMatrix { columns: s.cols };
        debug_assert_eq!(check_representation(m, field, &found), Ok(true));
        Outcome::Found(found)
    } else {
        Outcome::None
    };
    Ok(RepresentationResult {
        field: field.order(),
        outcome,
    })
}

pub fn find_representation(m: &TwoPartition, field: &FieldSpec) -> RepresentationResult {
    find_representation_with_basis(m, field, first_basis(m)).expect("first basis is a basis")
}

pub fn representability_summary(m: &TwoPartition, fields: &[FieldSpec]) -> RepresentabilitySummary {
    let results: Vec<RepresentationResult> = fields.iter().map(|f| find_representation(m, f)).collect();
    let representable_over_battery = results.iter().any(|r| r.is_found());
    RepresentabilitySummary {
        results,
        representable_over_battery,
    }
}
