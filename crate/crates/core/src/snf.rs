//! Integer matrices: Smith normal form, kernels, and `H^1` of a cyclic group
//! acting on a lattice.

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("integer matrix"))
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("integer matrix"))
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> IntMatrix {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, x: i64) {
        self.data[r * self.cols + c] = x;
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add(out.get(i, j), mul(a, other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.checked_sub(b).ok_or(Error::Overflow("integer matrix")))
            .collect::<Result<Vec<i64>>>()?;
        Ok(IntMatrix::new(self.rows, self.cols, data))
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for r in 0..self.rows {
            let v = add(self.get(r, dst), mul(k, self.get(r, src))?)?;
            self.set(r, dst, v);
        }
        Ok(())
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for c in 0..self.cols {
            let v = add(self.get(dst, c), mul(k, self.get(src, c))?)?;
            self.set(dst, c, v);
        }
        Ok(())
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

/// Diagonal of the Smith normal form: `d_1 | d_2 | ... `, nonnegative, with
/// trailing zeros for the rank deficiency (length `min(rows, cols)`).
pub fn smith_diagonal(a: &IntMatrix) -> Result<Vec<i64>> {
    let mut m = a.clone();
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // pivot: smallest nonzero absolute value in the remaining block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..m.rows {
                for c in t..m.cols {
                    let v = m.get(r, c);
                    if v != 0 && best.map_or(true, |(br, bc)| v.abs() < m.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                return Ok(finish(&m, n));
            };
            m.swap_rows(t, pr);
            m.swap_cols(t, pc);
            let p = m.get(t, t);
            let mut clean = true;
            for r in t + 1..m.rows {
                let q = m.get(r, t) / p;
                if q != 0 {
                    m.add_row(r, t, -q)?;
                }
                clean &= m.get(r, t) == 0;
            }
            for c in t + 1..m.cols {
                let q = m.get(t, c) / p;
                if q != 0 {
                    m.add_col(c, t, -q)?;
                }
                clean &= m.get(t, c) == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: p must divide the rest of the block
            let bad = (t + 1..m.rows).find(|&r| (t + 1..m.cols).any(|c| m.get(r, c) % p != 0));
            match bad {
                Some(r) => m.add_row(t, r, 1)?,
                None => break,
            }
        }
    }
    Ok(finish(&m, n))
}

fn finish(m: &IntMatrix, n: usize) -> Vec<i64> {
    (0..n).map(|i| m.get(i, i).abs()).collect()
}

/// Column-echelon form `A U = [H | 0]`; returns `(U, U^{-1}, rank)` with `U` unimodular.
pub fn column_echelon(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix, usize)> {
    let mut m = a.clone();
    let n = m.cols;
    let mut u = IntMatrix::identity(n);
    let mut uinv = IntMatrix::identity(n);
    let mut rank = 0;
    for r in 0..m.rows {
        if rank == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (rank..n).filter(|&c| m.get(r, c) != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&c| m.get(r, c).abs()).expect("nonempty");
            if p != rank {
                m.swap_cols(rank, p);
                u.swap_cols(rank, p);
                uinv.swap_rows(rank, p);
            }
            if nz.len() == 1 {
                break;
            }
            let pv = m.get(r, rank);
            for c in rank + 1..n {
                let q = m.get(r, c) / pv;
                if q != 0 {
                    m.add_col(c, rank, -q)?;
                    u.add_col(c, rank, -q)?;
                    // U <- U E with E = I - q e_rank e_c^T, so U^{-1} <- E^{-1} U^{-1}
                    uinv.add_row(rank, c, q)?;
                }
            }
        }
        if m.get(r, rank) != 0 {
            if m.get(r, rank) < 0 {
                m.negate_col(rank);
                u.negate_col(rank);
                uinv.negate_row(rank);
            }
            rank += 1;
        }
    }
    Ok((u, uinv, rank))
}

/// A Z-basis of `{x : A x = 0}` as the columns of the returned matrix.
pub fn kernel(a: &IntMatrix) -> Result<IntMatrix> {
    let (u, _, rank) = column_echelon(a)?;
    let k = u.cols - rank;
    let mut out = IntMatrix::zeros(u.rows, k);
    for r in 0..u.rows {
        for c in 0..k {
            out.set(r, c, u.get(r, rank + c));
        }
    }
    Ok(out)
}

/// `H^1(<g>, Z^n)` for `g` of finite order `m` acting by `mat`:
/// `ker(1 + g + ... + g^{m-1}) / im(g - 1)`, as invariant factors `> 1`.
pub fn cyclic_h1(mat: &IntMatrix, m: usize) -> Result<Vec<i64>> {
    let n = mat.rows;
    let id = IntMatrix::identity(n);
    let mut norm = IntMatrix::zeros(n, n);
    let mut power = id.clone();
    for _ in 0..m {
        norm = IntMatrix::new(n, n, norm.data.iter().zip(&power.data).map(|(a, b)| a + b).collect());
        power = power.mul(mat)?;
    }
    if power != id {
        return Err(Error::Consistency(format!("matrix does not have order dividing {m}")));
    }
    let (_, uinv, rank) = column_echelon(&norm)?;
    let k = n - rank;
    let d = mat.sub(&id)?;
    // coordinates of im(g - 1) in the kernel basis: bottom k rows of U^{-1} (g - 1)
    let coords = uinv.mul(&d)?;
    for r in 0..rank {
        if (0..n).any(|c| coords.get(r, c) != 0) {
            return Err(Error::Consistency("image of g - 1 escapes the kernel of the norm".into()));
        }
    }
    let x = IntMatrix::new(k, n, coords.data[rank * n..].to_vec());
    let diag = smith_diagonal(&x)?;
    let nonzero = diag.iter().filter(|&&v| v != 0).count();
    if nonzero < k {
        return Err(Error::Consistency("H^1 of a finite cyclic group must be finite".into()));
    }
    Ok(diag.into_iter().filter(|&v| v > 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_small() {
        let a = IntMatrix::new(2, 2, vec![2, 4, 6, 8]);
        assert_eq!(smith_diagonal(&a).unwrap(), vec![2, 4]);
        let a = IntMatrix::new(3, 3, vec![2, 0, 0, 0, 3, 0, 0, 0, 0]);
        assert_eq!(smith_diagonal(&a).unwrap(), vec![1, 6, 0]);
    }

    #[test]
    fn kernel_is_saturated() {
        let a = IntMatrix::new(1, 3, vec![2, 4, 6]);
        let k = kernel(&a).unwrap();
        assert_eq!(k.cols, 2);
        assert_eq!(a.mul(&k).unwrap(), IntMatrix::zeros(1, 2));
        // saturated: gcd of maximal minors is 1
        let d = smith_diagonal(&k).unwrap();
        assert_eq!(d, vec![1, 1]);
    }

    #[test]
    fn h1_of_swap_and_negation() {
        // swap on Z^2 is a permutation module: H^1 = 0
        let swap = IntMatrix::new(2, 2, vec![0, 1, 1, 0]);
        assert!(cyclic_h1(&swap, 2).unwrap().is_empty());
        // -1 on Z: ker(N = 0) / 2Z = Z/2
        let neg = IntMatrix::new(1, 1, vec![-1]);
        assert_eq!(cyclic_h1(&neg, 2).unwrap(), vec![2]);
        assert!(cyclic_h1(&IntMatrix::identity(3), 1).unwrap().is_empty());
    }
}
