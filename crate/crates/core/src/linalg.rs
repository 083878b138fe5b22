//! Exact linear algebra over [`GaussRat`]: reduced row echelon subspaces, rank and kernels.

use num_traits::{One, Zero};

use crate::scalar::GaussRat;

/// Sparse row: `(column, value)` pairs sorted by column, no explicit zeros.
pub type SparseRow = Vec<(usize, GaussRat)>;

/// A subspace of `GaussRat^n` stored as its (unique) reduced row echelon basis.
///
/// Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Sorted by pivot column; the pivot entry of each row is `1` and is the first entry.
    rows: Vec<SparseRow>,
}

fn to_sparse(v: &[GaussRat]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x.clone()))
        .collect()
}

/// `row - coef * other`, both sparse.
fn sub_scaled(row: &SparseRow, coef: &GaussRat, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, -(coef * &other[j].1)));
            j += 1;
        } else {
            let x = &row[i].1 - &(coef * &other[j].1);
            if !x.is_zero() {
                out.push((row[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient).map(|j| vec![(j, GaussRat::one())]).collect();
        Self { ambient, rows }
    }

    /// Span of the given dense rows, computed by batch Gauss-Jordan elimination.
    pub fn span<I>(ambient: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<GaussRat>>,
    {
        let rref = rref(rows.into_iter().collect(), ambient);
        let rows = rref
            .rows
            .iter()
            .take(rref.pivots.len())
            .map(|r| to_sparse(r))
            .collect();
        Self { ambient, rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn dense_rows(&self) -> Vec<Vec<GaussRat>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![GaussRat::zero(); self.ambient];
                for (j, x) in r {
                    v[*j] = x.clone();
                }
                v
            })
            .collect()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Reduces `v` in place modulo the subspace. Afterwards `v` is zero iff it was in the span.
    pub fn reduce(&self, v: &mut [GaussRat]) {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        for row in &self.rows {
            let p = row[0].0;
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (j, a) in row {
                v[*j] -= &(&c * a);
            }
        }
    }

    pub fn contains(&self, v: &[GaussRat]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[GaussRat]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let scale = w[p].inv().expect("nonzero pivot");
        let new_row: SparseRow = to_sparse(&w)
            .into_iter()
            .map(|(j, x)| (j, &x * &scale))
            .collect();
        for row in &mut self.rows {
            if let Ok(k) = row.binary_search_by_key(&p, |e| e.0) {
                let c = row[k].1.clone();
                *row = sub_scaled(row, &c, &new_row);
            }
        }
        let at = self.rows.partition_point(|r| r[0].0 < p);
        self.rows.insert(at, new_row);
        true
    }

    /// The sum `self + other`.
    pub fn join(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut out = self.clone();
        for r in other.dense_rows() {
            out.insert(&r);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dense_rows().iter().all(|r| other.contains(r))
    }

    /// `dim(self ∩ other)` via `dim A + dim B − dim(A + B)`.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.join(other).dim()
    }
}

/// Result of batch Gauss-Jordan elimination of a dense matrix.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Reduced rows; the first `pivots.len()` rows are nonzero.
    pub rows: Vec<Vec<GaussRat>>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination; among candidate pivots in a column the simplest coefficient wins.
pub fn rref(mut rows: Vec<Vec<GaussRat>>, ncols: usize) -> Rref {
    for r in &rows {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let best = (next..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].complexity());
        let Some(best) = best else { continue };
        rows.swap(next, best);
        let scale = rows[next][col].inv().expect("nonzero pivot");
        for x in rows[next].iter_mut().skip(col) {
            *x = &*x * &scale;
        }
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for j in col..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &(&c * &pivot_row[j]);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    Rref { rows, pivots }
}

pub fn rank(rows: Vec<Vec<GaussRat>>, ncols: usize) -> usize {
    rref(rows, ncols).pivots.len()
}

/// Right kernel `{v | M v = 0}` of an `m × ncols` matrix.
pub fn kernel(rows: Vec<Vec<GaussRat>>, ncols: usize) -> Subspace {
    let r = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let basis = (0..ncols).filter(|&f| !is_pivot[f]).map(|f| {
        let mut v = vec![GaussRat::zero(); ncols];
        v[f] = GaussRat::one();
        for (i, &p) in r.pivots.iter().enumerate() {
            v[p] = -r.rows[i][f].clone();
        }
        v
    });
    Subspace::span(ncols, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<GaussRat> {
        xs.iter().map(|&x| GaussRat::from_int(x)).collect()
    }

    #[test]
    fn insert_matches_batch_span() {
        let rows = vec![
            v(&[1, 2, 3, 0]),
            v(&[2, 4, 6, 0]),
            v(&[0, 1, 0, 1]),
            v(&[1, 3, 3, 1]),
        ];
        let batch = Subspace::span(4, rows.clone());
        let mut inc = Subspace::zero(4);
        for r in &rows {
            inc.insert(r);
        }
        assert_eq!(batch.dim(), 2);
        assert_eq!(batch, inc);
    }

    #[test]
    fn kernel_of_sum_functional() {
        // x0 + x1 = 0 in 2 dims: kernel spanned by (1, -1).
        let k = kernel(vec![v(&[1, 1])], 2);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&v(&[1, -1])));
        assert!(!k.contains(&v(&[1, 1])));
    }

    #[test]
    fn complex_pivots() {
        let i = GaussRat::i();
        let rows = vec![
            vec![i.clone(), GaussRat::one()],
            vec![GaussRat::one(), -i.clone()],
        ];
        // second row = -i * first row
        assert_eq!(rank(rows, 2), 1);
    }

    #[test]
    fn intersection_dimension() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersection_dim(&b), 1);
        assert!(!a.is_subspace_of(&b));
        assert!(Subspace::zero(3).is_subspace_of(&a));
        assert_eq!(a.join(&b), Subspace::full(3));
    }
}
