//! Simplicial homology with Z/2 coefficients.
//!
//! Boundary matrices are reduced with the standard left-to-right column
//! algorithm, keeping a table from lowest nonzero row to the column that owns
//! it. Dimensions are processed from the top down so that columns known to be
//! pivots of the next boundary can be cleared without reduction.

use serde::Serialize;

use crate::error::{Limits, Result};
use crate::simplicial::{FaceFamily, SimplicialComplex};

/// Sparse column-major matrix over Z/2; each column holds its sorted row
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Matrix {
    rows: usize,
    cols: Vec<Vec<u32>>,
}

impl Z2Matrix {
    pub fn new(rows: usize, mut cols: Vec<Vec<u32>>) -> Self {
        for c in &mut cols {
            c.sort_unstable();
            c.dedup();
            debug_assert!(c.last().is_none_or(|&r| (r as usize) < rows));
        }
        Z2Matrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].binary_search(&(i as u32)).is_ok()
    }

    /// Product `self * rhs` over Z/2.
    pub fn mul(&self, rhs: &Z2Matrix) -> Z2Matrix {
        assert_eq!(self.cols(), rhs.rows(), "dimension mismatch");
        let cols = rhs
            .cols
            .iter()
            .map(|c| {
                let mut acc: Vec<u32> = Vec::new();
                for &k in c {
                    acc = xor_sorted(&acc, &self.cols[k as usize]);
                }
                acc
            })
            .collect();
        Z2Matrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Column permutation; column `j` of the result is column `order[j]`.
    pub fn permute_columns(&self, order: &[usize]) -> Z2Matrix {
        Z2Matrix {
            rows: self.rows,
            cols: order.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        reduce(self.cols.clone(), &[]).0
    }
}

/// Symmetric difference of two sorted index lists.
fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Column reduction. Columns listed in `cleared` are skipped. Returns the
/// rank and the pivot rows (lowest ones of the nonzero reduced columns).
fn reduce(mut cols: Vec<Vec<u32>>, cleared: &[bool]) -> (usize, Vec<u32>) {
    let rows = cols
        .iter()
        .filter_map(|c| c.last())
        .max()
        .map_or(0, |&r| r as usize + 1);
    let mut owner: Vec<u32> = vec![u32::MAX; rows];
    let mut pivots = Vec::new();
    for j in 0..cols.len() {
        if cleared.get(j).copied().unwrap_or(false) {
            continue;
        }
        let mut col = std::mem::take(&mut cols[j]);
        while let Some(&low) = col.last() {
            let o = owner[low as usize];
            if o == u32::MAX {
                owner[low as usize] = j as u32;
                pivots.push(low);
                break;
            }
            col = xor_sorted(&col, &cols[o as usize]);
        }
        cols[j] = col;
    }
    (pivots.len(), pivots)
}

/// Boundary matrix for each dimension `d >= 1`: rows are `(d-1)`-faces and
/// columns `d`-faces, both in face-family order.
pub fn boundary_matrices(x: &SimplicialComplex) -> Vec<Z2Matrix> {
    boundary_matrices_of(x.faces())
}

fn boundary_matrices_of(family: &FaceFamily) -> Vec<Z2Matrix> {
    let dims = family.dims();
    (1..dims.len())
        .map(|d| boundary_matrix(family, d))
        .collect()
}

fn boundary_matrix(family: &FaceFamily, d: usize) -> Z2Matrix {
    let lower = &family.dims()[d - 1];
    let upper = &family.dims()[d];
    let mut scratch = Vec::with_capacity(d);
    let cols = upper
        .iter()
        .map(|face| {
            let mut col: Vec<u32> = (0..face.len())
                .map(|skip| {
                    scratch.clear();
                    scratch.extend(
                        face.iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v),
                    );
                    lower.position(&scratch).expect("downward closed") as u32
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    Z2Matrix {
        rows: lower.len(),
        cols,
    }
}

/// Unreduced Betti numbers `b_0..b_dim` over Z/2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Drops trailing zeros, so complexes of different dimension compare.
    pub fn trimmed(&self) -> &[usize] {
        let end = self.0.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
        &self.0[..end]
    }

    /// Equal homology, ignoring vanishing top dimensions.
    pub fn same_homology(&self, other: &BettiVector) -> bool {
        self.trimmed() == other.trimmed()
    }

    pub fn euler(&self) -> i64 {
        alternating_sum(&self.0)
    }

    /// `(1, 0, ..., 0)`, the Betti vector of a contractible space.
    pub fn is_point_like(&self) -> bool {
        self.0.first() == Some(&1) && self.0.iter().skip(1).all(|&b| b == 0)
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn alternating_sum(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

pub fn betti_z2(x: &SimplicialComplex) -> BettiVector {
    betti_z2_limited(x, &Limits::new(usize::MAX)).expect("unbounded")
}

/// Betti numbers, refusing complexes with more faces than the cap allows.
pub fn betti_z2_limited(x: &SimplicialComplex, limits: &Limits) -> Result<BettiVector> {
    let family = x.try_faces(limits)?;
    let sizes: Vec<usize> = family.dims().iter().map(|l| l.len()).collect();
    Ok(betti_of_chain_complex(&sizes, |d| {
        boundary_matrix(family, d).cols
    }))
}

/// Betti numbers of a Z/2 chain complex with `sizes[d]` generators in degree
/// `d`; `boundary(d)` lists, for each degree-`d` generator, the degree-`d-1`
/// generators in its boundary.
pub fn betti_of_chain_complex<F>(sizes: &[usize], mut boundary: F) -> BettiVector
where
    F: FnMut(usize) -> Vec<Vec<u32>>,
{
    let top = sizes.len();
    // rank[d] = rank of the boundary map out of degree d
    let mut rank = vec![0usize; top + 1];
    let mut cleared_next: Vec<bool> = Vec::new();
    for d in (1..top).rev() {
        let mut cols = boundary(d);
        for c in &mut cols {
            c.sort_unstable();
        }
        let (r, pivots) = reduce(cols, &cleared_next);
        rank[d] = r;
        // a generator that is a pivot row here is a boundary, so its own
        // column in the degree below reduces to zero
        cleared_next = vec![false; sizes[d - 1]];
        for p in pivots {
            cleared_next[p as usize] = true;
        }
    }
    BettiVector((0..top).map(|d| sizes[d] - rank[d] - rank[d + 1]).collect())
}

pub fn euler_characteristic(x: &SimplicialComplex) -> i64 {
    alternating_sum(&x.f_vector())
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiReport {
    pub betti: BettiVector,
    pub euler: i64,
}

impl BettiReport {
    pub fn of(x: &SimplicialComplex, limits: &Limits) -> Result<Self> {
        let betti = betti_z2_limited(x, limits)?;
        // equal to the alternating face count
        let euler = betti.euler();
        Ok(BettiReport { betti, euler })
    }
}
