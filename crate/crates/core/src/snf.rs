//! Smith normal form of small integer matrices.

/// `U · A · V = diag(d₁, …, d_r, 0, …)` with `d₁ | d₂ | …`, all `dᵢ > 0`.
///
/// Only `V⁻¹` is tracked: it expresses the new basis of the column lattice in terms of the
/// old one, which is what turns a relation matrix into generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub diagonal: Vec<i64>,
    pub v_inverse: Vec<Vec<i64>>,
}

/// Exact Smith normal form; the pivot is always an entry of minimal absolute value.
#[allow(clippy::needless_range_loop)]
pub fn smith_normal_form(matrix: &[Vec<i64>]) -> Smith {
    let m = matrix.len();
    let k = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| {
            assert_eq!(r.len(), k, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let mut vinv: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diagonal = Vec::new();

    for t in 0..m.min(k) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..k).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                vinv.swap(t, pj);
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..k {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..k {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    // col_j -= q col_t  ⇒  row_t(V⁻¹) += q row_j(V⁻¹)
                    for c in 0..k {
                        vinv[t][c] += q * vinv[j][c];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..m).find(|&i| (t + 1..k).any(|j| a[i][j] % p != 0));
            match bad_row {
                Some(i) => {
                    for j in t..k {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] == 0 {
            break;
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for c in 0..k {
                vinv[t][c] = -vinv[t][c];
            }
        }
        diagonal.push(a[t][t] as i64);
    }
    Smith {
        diagonal,
        v_inverse: vinv
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect(),
    }
}
