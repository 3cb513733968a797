//! Sparse LU factorization of a simplex basis with product-form updates.
//!
//! The factorization is right-looking Gaussian elimination with Markowitz
//! pivot selection and threshold partial pivoting on the column. Rank-one
//! basis changes between refactorizations are kept as an eta file.
//!
//! Memory is O(nnz(L) + nnz(U) + eta entries); no dense m×m array is ever
//! allocated.

use std::fmt;

/// Relative magnitude a pivot must have within its active column.
const THRESHOLD: f64 = 0.1;
/// Entries below this magnitude are treated as structural zeros.
const DROP: f64 = 1e-14;
/// Number of candidate columns/rows inspected once a pivot has been found.
const SEARCH_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SingularBasis {
    pub rank: usize,
}

impl fmt::Display for SingularBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "basis is singular (numerical rank {})", self.rank)
    }
}

#[derive(Debug, Clone)]
struct Eta {
    pos: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

/// Doubly-linked count buckets, used for both rows and columns.
struct Buckets {
    head: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    count: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Buckets {
    fn new(counts: &[usize], max_count: usize) -> Self {
        let n = counts.len();
        let mut b = Buckets {
            head: vec![NIL; max_count + 2],
            next: vec![NIL; n],
            prev: vec![NIL; n],
            count: counts.to_vec(),
        };
        // insert in reverse so each bucket lists items in increasing order
        for i in (0..n).rev() {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        let c = self.count[i];
        let h = self.head[c];
        self.next[i] = h;
        self.prev[i] = NIL;
        if h != NIL {
            self.prev[h] = i;
        }
        self.head[c] = i;
    }

    fn remove(&mut self, i: usize) {
        let c = self.count[i];
        let (p, n) = (self.prev[i], self.next[i]);
        if p != NIL {
            self.next[p] = n;
        } else {
            self.head[c] = n;
        }
        if n != NIL {
            self.prev[n] = p;
        }
    }

    fn set(&mut self, i: usize, c: usize) {
        self.remove(i);
        self.count[i] = c;
        self.insert(i);
    }
}

/// LU factors of a square sparse matrix plus the eta file of later updates.
#[derive(Debug, Clone)]
pub struct BasisFactor {
    m: usize,
    pivot_row: Vec<usize>,
    pivot_col: Vec<usize>,
    pivot_val: Vec<f64>,
    l_start: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    u_start: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
    etas: Vec<Eta>,
}

impl BasisFactor {
    /// Factorizes the matrix whose `j`-th column is `columns[j]` (row, value).
    pub fn factorize(m: usize, columns: &[&[(usize, f64)]]) -> Result<Self, SingularBasis> {
        assert_eq!(columns.len(), m);
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, col) in columns.iter().enumerate() {
            for &(i, v) in col.iter() {
                if v.abs() > DROP {
                    rows[i].push((j, v));
                    col_rows[j].push(i);
                }
            }
        }
        let row_counts: Vec<usize> = rows.iter().map(Vec::len).collect();
        let col_counts: Vec<usize> = col_rows.iter().map(Vec::len).collect();
        let max_count = m.max(1);
        let mut row_b = Buckets::new(&row_counts, max_count + m);
        let mut col_b = Buckets::new(&col_counts, max_count + m);
        let mut row_active = vec![true; m];
        let mut col_active = vec![true; m];

        let mut f = BasisFactor {
            m,
            pivot_row: Vec::with_capacity(m),
            pivot_col: Vec::with_capacity(m),
            pivot_val: Vec::with_capacity(m),
            l_start: vec![0],
            l_idx: Vec::new(),
            l_val: Vec::new(),
            u_start: vec![0],
            u_idx: Vec::new(),
            u_val: Vec::new(),
            etas: Vec::new(),
        };

        let mut pos = vec![NIL; m];
        for step in 0..m {
            let (p, q) = match select_pivot(&rows, &col_rows, &row_b, &col_b, max_count + m) {
                Some(pq) => pq,
                None => return Err(SingularBasis { rank: step }),
            };
            let pivot = entry(&rows[p], q).expect("pivot entry present");
            f.pivot_row.push(p);
            f.pivot_col.push(q);
            f.pivot_val.push(pivot);

            // detach pivot row from the active column patterns
            row_active[p] = false;
            row_b.remove(p);
            let prow = std::mem::take(&mut rows[p]);
            for &(j, _) in &prow {
                if j == q {
                    continue;
                }
                let cr = &mut col_rows[j];
                if let Some(k) = cr.iter().position(|&r| r == p) {
                    cr.swap_remove(k);
                }
                let c = cr.len();
                col_b.set(j, c);
            }
            col_active[q] = false;
            col_b.remove(q);
            let elim_rows = std::mem::take(&mut col_rows[q]);

            for &i in &elim_rows {
                if i == p || !row_active[i] {
                    continue;
                }
                let row = &mut rows[i];
                let k = match row.iter().position(|&(j, _)| j == q) {
                    Some(k) => k,
                    None => continue,
                };
                let aiq = row.swap_remove(k).1;
                let mult = aiq / pivot;
                f.l_idx.push(i);
                f.l_val.push(mult);
                for (k, &(j, _)) in row.iter().enumerate() {
                    pos[j] = k;
                }
                for &(j, v) in &prow {
                    if j == q {
                        continue;
                    }
                    if pos[j] != NIL {
                        row[pos[j]].1 -= mult * v;
                    } else {
                        row.push((j, -mult * v));
                        col_rows[j].push(i);
                        let c = col_rows[j].len();
                        col_b.set(j, c);
                    }
                }
                for &(j, _) in row.iter() {
                    pos[j] = NIL;
                }
                let c = row.len();
                row_b.set(i, c);
            }
            f.l_start.push(f.l_idx.len());
            for &(j, v) in &prow {
                if j != q {
                    f.u_idx.push(j);
                    f.u_val.push(v);
                }
            }
            f.u_start.push(f.u_idx.len());
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn num_updates(&self) -> usize {
        self.etas.len()
    }

    /// Solves `B x = rhs` in place (`rhs` indexed by row, result by basis position).
    pub fn ftran(&self, rhs: &mut [f64]) {
        let m = self.m;
        // forward elimination on rows
        for k in 0..m {
            let wp = rhs[self.pivot_row[k]];
            if wp != 0.0 {
                for idx in self.l_start[k]..self.l_start[k + 1] {
                    rhs[self.l_idx[idx]] -= self.l_val[idx] * wp;
                }
            }
        }
        // back substitution; x indexed by column
        let mut x = vec![0.0; m];
        for k in (0..m).rev() {
            let mut s = rhs[self.pivot_row[k]];
            for idx in self.u_start[k]..self.u_start[k + 1] {
                s -= self.u_val[idx] * x[self.u_idx[idx]];
            }
            x[self.pivot_col[k]] = s / self.pivot_val[k];
        }
        for eta in &self.etas {
            let xr = x[eta.pos] / eta.pivot;
            x[eta.pos] = xr;
            if xr != 0.0 {
                for &(i, a) in &eta.entries {
                    x[i] -= a * xr;
                }
            }
        }
        rhs.copy_from_slice(&x);
    }

    /// Solves `Bᵀ y = rhs` in place (`rhs` indexed by basis position, result by row).
    pub fn btran(&self, rhs: &mut [f64]) {
        let m = self.m;
        for eta in self.etas.iter().rev() {
            let mut s = rhs[eta.pos];
            for &(i, a) in &eta.entries {
                s -= a * rhs[i];
            }
            rhs[eta.pos] = s / eta.pivot;
        }
        // Uᵀ z = c, processed in pivot order
        let mut z = vec![0.0; m];
        for k in 0..m {
            let zk = rhs[self.pivot_col[k]] / self.pivot_val[k];
            z[self.pivot_row[k]] = zk;
            if zk != 0.0 {
                for idx in self.u_start[k]..self.u_start[k + 1] {
                    rhs[self.u_idx[idx]] -= self.u_val[idx] * zk;
                }
            }
        }
        // y = Mᵀ z
        for k in (0..m).rev() {
            let p = self.pivot_row[k];
            let mut s = z[p];
            for idx in self.l_start[k]..self.l_start[k + 1] {
                s -= self.l_val[idx] * z[self.l_idx[idx]];
            }
            z[p] = s;
        }
        rhs.copy_from_slice(&z);
    }

    /// Records the replacement of basis position `pos` by a column whose
    /// FTRAN image is `alpha`.
    pub fn update(&mut self, pos: usize, alpha: &[f64]) {
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|&(i, a)| i != pos && a.abs() > DROP)
            .map(|(i, &a)| (i, a))
            .collect();
        self.etas.push(Eta { pos, pivot: alpha[pos], entries });
    }
}

fn entry(row: &[(usize, f64)], col: usize) -> Option<f64> {
    row.iter().find(|&&(j, _)| j == col).map(|&(_, v)| v)
}

fn col_max(rows: &[Vec<(usize, f64)>], col_rows: &[usize], col: usize) -> f64 {
    col_rows
        .iter()
        .filter_map(|&i| entry(&rows[i], col))
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Markowitz search over the sparsest columns and rows.
fn select_pivot(
    rows: &[Vec<(usize, f64)>],
    col_rows: &[Vec<usize>],
    row_b: &Buckets,
    col_b: &Buckets,
    max_count: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_cost = usize::MAX;
    let mut best_mag = 0.0;
    let mut searched = 0;
    for c in 1..=max_count.min(col_b.head.len() - 1) {
        // columns with c entries
        let mut j = col_b.head[c];
        while j != NIL {
            let cmax = col_max(rows, &col_rows[j], j);
            for &i in &col_rows[j] {
                let v = match entry(&rows[i], j) {
                    Some(v) => v,
                    None => continue,
                };
                if v.abs() <= DROP || v.abs() < THRESHOLD * cmax {
                    continue;
                }
                let cost = (rows[i].len() - 1) * (c - 1);
                if cost < best_cost || (cost == best_cost && v.abs() > best_mag) {
                    best_cost = cost;
                    best_mag = v.abs();
                    best = Some((i, j));
                }
            }
            if best.is_some() {
                searched += 1;
                if searched >= SEARCH_LIMIT || best_cost <= (c - 1) * (c - 1) {
                    return best;
                }
            }
            j = col_b.next[j];
        }
        // rows with c entries
        let mut i = row_b.head[c];
        while i != NIL {
            for &(j, v) in &rows[i] {
                if v.abs() <= DROP {
                    continue;
                }
                let cmax = col_max(rows, &col_rows[j], j);
                if v.abs() < THRESHOLD * cmax {
                    continue;
                }
                let cost = (c - 1) * (col_rows[j].len() - 1);
                if cost < best_cost || (cost == best_cost && v.abs() > best_mag) {
                    best_cost = cost;
                    best_mag = v.abs();
                    best = Some((i, j));
                }
            }
            if best.is_some() {
                searched += 1;
                if searched >= SEARCH_LIMIT || best_cost <= c * (c - 1) {
                    return best;
                }
            }
            i = row_b.next[i];
        }
        if best.is_some() && best_cost <= c * c {
            return best;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(cols: &[Vec<(usize, f64)>], x: &[f64], m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (j, col) in cols.iter().enumerate() {
            for &(i, v) in col {
                out[i] += v * x[j];
            }
        }
        out
    }

    fn dense_mul_t(cols: &[Vec<(usize, f64)>], y: &[f64]) -> Vec<f64> {
        cols.iter().map(|col| col.iter().map(|&(i, v)| v * y[i]).sum()).collect()
    }

    fn sample() -> Vec<Vec<(usize, f64)>> {
        vec![
            vec![(0, 2.0), (2, 1.0)],
            vec![(0, 1.0), (1, 3.0), (3, -1.0)],
            vec![(1, 1.0), (2, 4.0)],
            vec![(2, 1.0), (3, 5.0), (0, -2.0)],
        ]
    }

    #[test]
    fn ftran_and_btran_solve_the_system() {
        let cols = sample();
        let refs: Vec<&[(usize, f64)]> = cols.iter().map(|c| c.as_slice()).collect();
        let lu = BasisFactor::factorize(4, &refs).unwrap();
        let b = vec![1.0, -2.0, 3.5, 0.25];
        let mut x = b.clone();
        lu.ftran(&mut x);
        let back = dense_mul(&cols, &x, 4);
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
        let mut y = b.clone();
        lu.btran(&mut y);
        let back = dense_mul_t(&cols, &y);
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_update_tracks_column_replacement() {
        let mut cols = sample();
        let refs: Vec<&[(usize, f64)]> = cols.iter().map(|c| c.as_slice()).collect();
        let mut lu = BasisFactor::factorize(4, &refs).unwrap();
        let new_col = vec![(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)];
        let mut alpha = vec![1.0; 4];
        lu.ftran(&mut alpha);
        lu.update(2, &alpha);
        cols[2] = new_col;
        let b = vec![0.5, 1.0, -1.0, 2.0];
        let mut x = b.clone();
        lu.ftran(&mut x);
        let back = dense_mul(&cols, &x, 4);
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
        let mut y = b.clone();
        lu.btran(&mut y);
        let back = dense_mul_t(&cols, &y);
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let cols = [vec![(0, 1.0), (1, 2.0)], vec![(0, 2.0), (1, 4.0)]];
        let refs: Vec<&[(usize, f64)]> = cols.iter().map(|c| c.as_slice()).collect();
        assert!(BasisFactor::factorize(2, &refs).is_err());
    }

    #[test]
    fn empty_matrix_factorizes() {
        let lu = BasisFactor::factorize(0, &[]).unwrap();
        let mut x: Vec<f64> = vec![];
        lu.ftran(&mut x);
        assert_eq!(lu.dim(), 0);
    }
}
