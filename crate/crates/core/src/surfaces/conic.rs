//! Conic bundles over `P^1` in odd characteristic, given by a symmetric 3x3
//! matrix of polynomials in `t`: the fibre over `t` is the conic
//! `sum M_ij(t) X_i X_j = 0`. Row/column `i` carries a weight `w_i`, the entry
//! `M_ij` has degree at most `w_i + w_j`, and the fibre at infinity uses the
//! coefficients of `t^(w_i + w_j)`.

use serde::Serialize;

use super::CountReport;
use crate::error::{Error, Result};
use crate::gf::{linalg, poly, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicBundleModel {
    pub field: FieldSpec,
    /// Polynomials in `t`, coefficients ascending.
    pub entries: [[Vec<u64>; 3]; 3],
    pub weights: [u32; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    /// Rank 3: a smooth conic with `q + 1` points.
    Smooth,
    /// Rank 2 with conjugate lines: a single rational point.
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    /// `None` is the point at infinity.
    pub t: Option<u64>,
    pub kind: FiberKind,
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicBundleReport {
    pub q: u64,
    pub fibers: Vec<Fiber>,
    /// Total number of rational points, summed over fibres.
    pub count: CountReport,
    /// Number of singular fibres over `P^1(F_q)`.
    pub singular_rational: u64,
    /// `2 - singular_rational`.
    pub trace: i64,
    /// `(d, n)`: `n` closed points of degree `d` carry singular fibres.
    pub singular_closed_points: Vec<(u32, u64)>,
    /// Degree of the singular locus over the algebraic closure.
    pub singular_degree: u64,
    pub singular_degree_even: bool,
}

impl ConicBundleModel {
    pub fn new(field: &FieldSpec, entries: [[Vec<u64>; 3]; 3], weights: [u32; 3]) -> Result<ConicBundleModel> {
        if field.characteristic() == 2 {
            return Err(Error::ConicBundle("only odd characteristic is supported".into()));
        }
        let mut entries = entries;
        for row in entries.iter_mut() {
            for p in row.iter_mut() {
                if p.iter().any(|&c| c >= field.order()) {
                    return Err(Error::ConicBundle(format!("coefficient outside F_{}", field.order())));
                }
                poly::trim(p);
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::ConicBundle(format!("matrix is not symmetric at ({i},{j})")));
                }
                if let Some(d) = poly::degree(&entries[i][j]) {
                    if d as u32 > weights[i] + weights[j] {
                        return Err(Error::ConicBundle(format!(
                            "entry ({i},{j}) has degree {d} > w_{i} + w_{j} = {}",
                            weights[i] + weights[j]
                        )));
                    }
                }
            }
        }
        let b = ConicBundleModel { field: field.clone(), entries, weights };
        if b.determinant().is_empty() {
            return Err(Error::ConicBundle("determinant vanishes identically".into()));
        }
        Ok(b)
    }

    /// Diagonal bundle `diag(a, b, c)`.
    pub fn diagonal(field: &FieldSpec, diag: [Vec<u64>; 3], weights: [u32; 3]) -> Result<ConicBundleModel> {
        let mut entries: [[Vec<u64>; 3]; 3] = Default::default();
        for (i, d) in diag.into_iter().enumerate() {
            entries[i][i] = d;
        }
        ConicBundleModel::new(field, entries, weights)
    }

    /// The symmetric matrix of the fibre over `t` (`None` = infinity).
    pub fn fiber_matrix(&self, t: Option<u64>) -> [u64; 9] {
        let f = &self.field;
        let mut m = [0u64; 9];
        for i in 0..3 {
            for j in 0..3 {
                let p = &self.entries[i][j];
                m[3 * i + j] = match t {
                    Some(t) => p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, t), c)),
                    None => p.get((self.weights[i] + self.weights[j]) as usize).copied().unwrap_or(0),
                };
            }
        }
        m
    }

    /// `det M(t)`.
    pub fn determinant(&self) -> Vec<u64> {
        let f = &self.field;
        let e = &self.entries;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            poly::sub(f, &poly::mul(f, &e[1][a], &e[2][b]), &poly::mul(f, &e[1][c], &e[2][d]))
        };
        let t0 = poly::mul(f, &e[0][0], &minor(1, 2, 2, 1));
        let t1 = poly::mul(f, &e[0][1], &minor(0, 2, 2, 0));
        let t2 = poly::mul(f, &e[0][2], &minor(0, 1, 1, 0));
        poly::add(f, &poly::sub(f, &t0, &t1), &t2)
    }

    /// Degree of `det` on the homogenized family.
    pub fn expected_det_degree(&self) -> u32 {
        2 * self.weights.iter().sum::<u32>()
    }
}

fn classify(f: &FieldSpec, m: &[u64; 9], t: Option<u64>) -> Result<Fiber> {
    let q = f.order();
    let rank = linalg::rank(f, m, 3, 3);
    let at = || t.map_or("infinity".to_string(), |t| format!("t = {}", f.element(t)));
    match rank {
        3 => Ok(Fiber { t, kind: FiberKind::Smooth, points: q + 1 }),
        2 => {
            // a nonzero principal 2x2 minor describes the form modulo its kernel
            let d = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| f.sub(f.mul(m[4 * i], m[4 * j]), f.mul(m[3 * i + j], m[3 * i + j])))
                .find(|&d| d != 0)
                .ok_or_else(|| Error::Consistency("rank 2 symmetric matrix without a nonzero principal minor".into()))?;
            if f.is_square(f.neg(d)) {
                Err(Error::ConicBundle(format!("fibre at {} is a pair of rational lines", at())))
            } else {
                Ok(Fiber { t, kind: FiberKind::Singular, points: 1 })
            }
        }
        r => Err(Error::ConicBundle(format!("fibre at {} has rank {r}", at()))),
    }
}

/// `(d, n)` pairs: `n` distinct monic irreducible factors of degree `d`.
fn root_closed_points(f: &FieldSpec, det: &[u64]) -> Result<Vec<(u32, u64)>> {
    let Some(deg) = poly::degree(det) else {
        return Ok(Vec::new());
    };
    let q = f.order();
    let x = vec![0, 1];
    let mut frob = x.clone();
    // r[k] = deg gcd(det, t^(q^k) - t) = sum over d | k of d * n_d
    let mut n = vec![0u64; deg + 1];
    let mut out = Vec::new();
    for k in 1..=deg {
        frob = poly::powmod(f, &frob, q as u128, det)?;
        let g = poly::gcd(f, det, &poly::sub(f, &frob, &x));
        let r = poly::degree(&g).unwrap_or(0) as u64;
        let lower: u64 = (1..k).filter(|d| k % d == 0).map(|d| d as u64 * n[d]).sum();
        n[k] = (r - lower) / k as u64;
        if n[k] > 0 {
            out.push((k as u32, n[k]));
        }
    }
    Ok(out)
}

/// Classifies every rational fibre, sums the point count and determines the
/// singular locus over the algebraic closure.
pub fn conic_bundle_analyze(b: &ConicBundleModel) -> Result<ConicBundleReport> {
    let f = &b.field;
    let q = f.order();
    let mut fibers = Vec::with_capacity(q as usize + 1);
    for t in (0..q).map(Some).chain(std::iter::once(None)) {
        fibers.push(classify(f, &b.fiber_matrix(t), t)?);
    }
    let count: u64 = fibers.iter().map(|x| x.points).sum();
    let singular_rational = fibers.iter().filter(|x| x.kind == FiberKind::Singular).count() as u64;
    let det = b.determinant();
    let mut closed = root_closed_points(f, &det)?;
    let drop = b.expected_det_degree() as usize - poly::degree(&det).unwrap_or(0);
    if drop > 0 {
        match closed.first_mut() {
            Some((1, n)) => *n += 1,
            _ => closed.insert(0, (1, 1)),
        }
    }
    let singular_degree: u64 = closed.iter().map(|&(d, n)| d as u64 * n).sum();
    let rational_from_det = closed.iter().find(|(d, _)| *d == 1).map_or(0, |&(_, n)| n);
    if rational_from_det != singular_rational {
        return Err(Error::Consistency(format!(
            "{singular_rational} singular rational fibres but the determinant has {rational_from_det} rational zeros"
        )));
    }
    Ok(ConicBundleReport {
        q,
        fibers,
        count: CountReport::new(q, count),
        singular_rational,
        trace: 2 - singular_rational as i64,
        singular_closed_points: closed,
        singular_degree,
        singular_degree_even: singular_degree % 2 == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn constant_bundle() {
        let f = make_field(5, 1).unwrap();
        let b = ConicBundleModel::diagonal(&f, [vec![1], vec![1], vec![1]], [0, 0, 0]).unwrap();
        let r = conic_bundle_analyze(&b).unwrap();
        assert_eq!((r.count.count, r.trace, r.singular_degree), (36, 2, 0));
    }

    #[test]
    fn rejects_bad_input() {
        let f = make_field(5, 1).unwrap();
        // x^2 - y^2 splits: a pair of rational lines everywhere
        assert!(ConicBundleModel::diagonal(&f, [vec![1], vec![4], vec![]], [0, 0, 0]).is_err());
        let b = ConicBundleModel::diagonal(&f, [vec![1], vec![4], vec![0, 1]], [0, 0, 1]).unwrap();
        assert!(matches!(conic_bundle_analyze(&b), Err(Error::ConicBundle(_))));
        assert!(ConicBundleModel::diagonal(&f, [vec![1], vec![1], vec![0, 0, 1]], [0, 0, 0]).is_err());
        assert!(ConicBundleModel::diagonal(&make_field(2, 1).unwrap(), [vec![1], vec![1], vec![1]], [0, 0, 0]).is_err());
    }
}
