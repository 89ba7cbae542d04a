//! Dense determinant and rank over a [`FieldSpec`] (row-major `u64` codes).

use super::FieldSpec;

/// Determinant of an `n x n` matrix, by Gaussian elimination. Consumes the buffer.
pub fn det_in_place(f: &FieldSpec, a: &mut [u64], n: usize) -> u64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = f.neg(det);
        }
        let pv = a[col * n + col];
        det = f.mul(det, pv);
        let inv = f.inv(pv).expect("pivot is nonzero");
        for r in col + 1..n {
            let x = a[r * n + col];
            if x == 0 {
                continue;
            }
            let factor = f.mul(x, inv);
            for c in col..n {
                let s = f.mul(factor, a[col * n + c]);
                a[r * n + c] = f.sub(a[r * n + c], s);
            }
        }
    }
    det
}

pub fn det(f: &FieldSpec, a: &[u64], n: usize) -> u64 {
    let mut buf = a.to_vec();
    det_in_place(f, &mut buf, n)
}

/// 3x3 determinant of the rows `p, q, r`.
#[inline]
pub fn det3(f: &FieldSpec, p: &[u64; 3], q: &[u64; 3], r: &[u64; 3]) -> u64 {
    let m = |a, b| f.mul(a, b);
    let t1 = m(p[0], f.sub(m(q[1], r[2]), m(q[2], r[1])));
    let t2 = m(p[1], f.sub(m(q[0], r[2]), m(q[2], r[0])));
    let t3 = m(p[2], f.sub(m(q[0], r[1]), m(q[1], r[0])));
    f.add(f.sub(t1, t2), t3)
}

/// Rank of a `rows x cols` matrix. Consumes the buffer.
pub fn rank_in_place(f: &FieldSpec, a: &mut [u64], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in 0..cols {
                a.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = f.inv(a[rank * cols + col]).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let x = a[r * cols + col];
            if x == 0 {
                continue;
            }
            let factor = f.mul(x, inv);
            for c in col..cols {
                let s = f.mul(factor, a[rank * cols + c]);
                a[r * cols + c] = f.sub(a[r * cols + c], s);
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(f: &FieldSpec, a: &[u64], rows: usize, cols: usize) -> usize {
    let mut buf = a.to_vec();
    rank_in_place(f, &mut buf, rows, cols)
}

/// Basis of the right kernel of a `rows x cols` matrix.
pub fn kernel(f: &FieldSpec, a: &[u64], rows: usize, cols: usize) -> Vec<Vec<u64>> {
    let mut m = a.to_vec();
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for col in 0..cols {
        if r0 == rows {
            break;
        }
        let Some(piv) = (r0..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        for c in 0..cols {
            m.swap(piv * cols + c, r0 * cols + c);
        }
        let inv = f.inv(m[r0 * cols + col]).expect("pivot is nonzero");
        for c in 0..cols {
            m[r0 * cols + c] = f.mul(m[r0 * cols + c], inv);
        }
        for r in 0..rows {
            if r == r0 || m[r * cols + col] == 0 {
                continue;
            }
            let factor = m[r * cols + col];
            for c in 0..cols {
                let s = f.mul(factor, m[r0 * cols + c]);
                m[r * cols + c] = f.sub(m[r * cols + c], s);
            }
        }
        pivots.push(col);
        r0 += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[i * cols + fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn det_matches_cofactor_formula() {
        let f = make_field(7, 1).unwrap();
        let rows = [[1, 2, 3], [4, 5, 6], [0, 1, 5]];
        let flat: Vec<u64> = rows.iter().flatten().copied().collect();
        assert_eq!(det(&f, &flat, 3), det3(&f, &rows[0], &rows[1], &rows[2]));
        // 1*(25-6) - 2*(20-0) + 3*(4-0) = 19 - 40 + 12 = -9 = 5 mod 7
        assert_eq!(det3(&f, &rows[0], &rows[1], &rows[2]), 5);
    }

    #[test]
    fn rank_and_kernel() {
        let f = make_field(5, 1).unwrap();
        let a = [1, 2, 3, 2, 1, 4];
        assert_eq!(rank(&f, &a, 2, 3), 2);
        let k = kernel(&f, &a, 2, 3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for r in 0..2 {
            let s = (0..3).fold(0, |acc, c| f.add(acc, f.mul(a[r * 3 + c], v[c])));
            assert_eq!(s, 0);
        }
    }
}
