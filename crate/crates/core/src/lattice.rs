//! The lattices `Z^{1,r}` with canonical class `K = -3e0 + e1 + ... + er`,
//! their roots and line classes, and Weyl groups realised as permutation
//! groups on the line classes.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub type LatticeVector = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PicardLattice {
    r: usize,
}

impl PicardLattice {
    /// Blow-up of `P^2` in `r` points, `0 <= r <= 8`.
    pub fn new(r: usize) -> Result<PicardLattice> {
        if r > 8 {
            return Err(Error::InvalidVector(format!("r = {r} is outside 0..=8")));
        }
        Ok(PicardLattice { r })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// `diag(1, -1, ..., -1)`.
    pub fn dot(&self, a: &[i64], b: &[i64]) -> i64 {
        a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
    }

    pub fn canonical(&self) -> LatticeVector {
        let mut k = vec![1; self.rank()];
        k[0] = -3;
        k
    }

    pub fn basis(&self, i: usize) -> LatticeVector {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    fn check(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::InvalidVector(format!("expected {} coordinates, got {}", self.rank(), v.len())));
        }
        Ok(())
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        v.len() == self.rank() && self.dot(v, v) == -2 && self.dot(v, &self.canonical()) == 0
    }

    pub fn is_line(&self, v: &[i64]) -> bool {
        v.len() == self.rank() && self.dot(v, v) == -1 && self.dot(v, &self.canonical()) == -1
    }

    // Vectors with `v.v = -c`: for a given e0-coefficient the others have a
    // fixed sum of squares, which bounds the search.
    fn enumerate(&self, c: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<LatticeVector> {
        fn rec(i: usize, budget: i64, v: &mut Vec<i64>, keep: &dyn Fn(&[i64]) -> bool, out: &mut Vec<LatticeVector>) {
            if i == v.len() {
                if budget == 0 && keep(v) {
                    out.push(v.clone());
                }
                return;
            }
            let b = (budget as f64).sqrt() as i64;
            for x in -b..=b {
                v[i] = x;
                rec(i + 1, budget - x * x, v, keep, out);
            }
            v[i] = 0;
        }
        let mut out = Vec::new();
        let mut v = vec![0i64; self.rank()];
        for a0 in -6..=6 {
            v[0] = a0;
            rec(1, a0 * a0 + c, &mut v, &keep, &mut out);
        }
        out.sort();
        out
    }

    /// All `v` with `v.v = -1`, `v.K = -1`, in lexicographic order.
    pub fn line_classes(&self) -> Vec<LatticeVector> {
        self.enumerate(1, |v| self.is_line(v))
    }

    /// All `v` with `v.v = -2`, `v.K = 0`, in lexicographic order.
    pub fn roots(&self) -> Vec<LatticeVector> {
        self.enumerate(2, |v| self.is_root(v))
    }

    /// `e1 - e2, ..., e_{r-1} - e_r, e0 - e1 - e2 - e3`.
    pub fn simple_roots(&self) -> Vec<LatticeVector> {
        let mut out = Vec::new();
        for i in 1..self.r {
            let mut v = vec![0; self.rank()];
            v[i] = 1;
            v[i + 1] = -1;
            out.push(v);
        }
        if self.r >= 3 {
            let mut v = vec![0; self.rank()];
            v[..4].copy_from_slice(&[1, -1, -1, -1]);
            out.push(v);
        }
        out
    }

    /// Matrix (row-major, acting on columns) of `x -> x + (x.v) v`.
    pub fn reflection_matrix(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.check(v)?;
        if !self.is_root(v) {
            return Err(Error::InvalidVector(format!("{v:?} is not a root")));
        }
        let n = self.rank();
        let mut m = vec![0i64; n * n];
        for j in 0..n {
            let e = self.basis(j);
            let c = self.dot(&e, v);
            for i in 0..n {
                m[i * n + j] = e[i] + c * v[i];
            }
        }
        Ok(m)
    }
}

pub fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

pub fn mat_vec(a: &[i64], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
}

/// An isometry fixing `K`, with its permutation of the line classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// `(r+1) x (r+1)`, row-major; column `j` is the image of `e_j`.
    pub matrix: Vec<i64>,
    /// `line_perm[i]` is the index of the image of line `i`.
    pub line_perm: Vec<u8>,
}

impl WeylElement {
    pub fn rank(&self) -> usize {
        (self.matrix.len() as f64).sqrt() as usize
    }

    pub fn trace(&self) -> i64 {
        let n = self.rank();
        (0..n).map(|i| self.matrix[i * n + i]).sum()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, v)
    }

    pub fn order(&self) -> usize {
        perm_order(&self.line_perm)
    }

    pub fn fixed_lines(&self) -> usize {
        self.line_perm.iter().enumerate().filter(|&(i, &j)| i == j as usize).count()
    }
}

pub fn perm_order(p: &[u8]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut order = 1usize;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Orbits of the cyclic group generated by `p`, each listed as `v, p(v), p^2(v), ...`
/// starting from its least element; orbits ordered by that element.
pub fn perm_cycles(p: &[u8]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = p[i] as usize;
        }
        out.push(cyc);
    }
    out
}

/// `reflection(v)` as a Weyl element, with its line permutation.
pub fn reflection(lat: &PicardLattice, v: &[i64]) -> Result<WeylElement> {
    let matrix = lat.reflection_matrix(v)?;
    let lines = lat.line_classes();
    let index: HashMap<&[i64], u8> = lines.iter().enumerate().map(|(i, l)| (l.as_slice(), i as u8)).collect();
    let line_perm = lines
        .iter()
        .map(|l| index.get(mat_vec(&matrix, l).as_slice()).copied())
        .collect::<Option<Vec<u8>>>()
        .ok_or_else(|| Error::Consistency("reflection does not permute the lines".into()))?;
    Ok(WeylElement { matrix, line_perm })
}

/// `W(E_r)` for `r` in {6, 7}, stored as a flat table of line permutations in
/// breadth-first discovery order from the simple reflections.
pub struct WeylGroup {
    lattice: PicardLattice,
    lines: Vec<LatticeVector>,
    generators: Vec<WeylElement>,
    perms: Vec<u8>,
    index: HashMap<u64, u32>,
    /// Indices of `e1, ..., er, e0 - e1 - e2` among the lines: a Z-basis.
    span: Vec<usize>,
}

impl std::fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "W(E{}) of order {}", self.lattice.r, self.order())
    }
}

impl WeylGroup {
    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn lines(&self) -> &[LatticeVector] {
        &self.lines
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.perms.len() / self.lines.len()
    }

    pub fn perm(&self, i: usize) -> &[u8] {
        let m = self.lines.len();
        &self.perms[i * m..(i + 1) * m]
    }

    pub fn key(&self, perm: &[u8]) -> u64 {
        self.span.iter().fold(0u64, |acc, &s| (acc << 6) | perm[s] as u64)
    }

    pub fn index_of(&self, perm: &[u8]) -> Option<usize> {
        let i = *self.index.get(&self.key(perm))? as usize;
        (self.perm(i) == perm).then_some(i)
    }

    /// Recovers the matrix from the images of the spanning lines.
    pub fn matrix_of(&self, perm: &[u8]) -> Vec<i64> {
        let n = self.lattice.rank();
        let r = self.lattice.r;
        let mut m = vec![0i64; n * n];
        let img = |line: usize| &self.lines[perm[line] as usize];
        for j in 1..=r {
            let col = img(self.span[j - 1]);
            for i in 0..n {
                m[i * n + j] = col[i];
            }
        }
        // e0 = (e0 - e1 - e2) + e1 + e2
        let c = img(self.span[r]);
        for i in 0..n {
            m[i * n] = c[i] + m[i * n + 1] + m[i * n + 2];
        }
        m
    }

    pub fn element(&self, i: usize) -> WeylElement {
        let p = self.perm(i).to_vec();
        WeylElement { matrix: self.matrix_of(&p), line_perm: p }
    }

    pub fn element_from_perm(&self, perm: &[u8]) -> WeylElement {
        WeylElement { matrix: self.matrix_of(perm), line_perm: perm.to_vec() }
    }

    pub fn line_index(&self, v: &[i64]) -> Option<usize> {
        self.lines.binary_search_by(|l| l.as_slice().cmp(v)).ok()
    }
}

/// `(a . b)[i] = a[b[i]]`: apply `b` first.
pub fn compose(a: &[u8], b: &[u8], out: &mut [u8]) {
    for (o, &x) in out.iter_mut().zip(b) {
        *o = a[x as usize];
    }
}

pub fn invert(a: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// Closure of the simple reflections. `r` must be 6 or 7.
pub fn generate_weyl(lat: &PicardLattice) -> Result<WeylGroup> {
    let r = lat.r();
    if !(6..=7).contains(&r) {
        return Err(Error::InvalidVector(format!("Weyl group generation supports r = 6, 7 (got {r})")));
    }
    let lines = lat.line_classes();
    let m = lines.len();
    let generators =
        lat.simple_roots().iter().map(|v| reflection(lat, v)).collect::<Result<Vec<WeylElement>>>()?;
    let find = |v: &[i64]| lines.binary_search_by(|l| l.as_slice().cmp(v)).expect("line class");
    let mut span: Vec<usize> = (1..=r).map(|i| find(&lat.basis(i))).collect();
    let mut h = lat.basis(0);
    h[1] = -1;
    h[2] = -1;
    span.push(find(&h));

    let mut group = WeylGroup { lattice: *lat, lines, generators, perms: Vec::new(), index: HashMap::new(), span };
    let identity: Vec<u8> = (0..m as u8).collect();
    group.index.insert(group.key(&identity), 0);
    group.perms.extend_from_slice(&identity);
    let mut buf = vec![0u8; m];
    let mut head = 0usize;
    while head < group.order() {
        for g in 0..group.generators.len() {
            let gp = &group.generators[g].line_perm;
            compose(gp, &group.perms[head * m..(head + 1) * m], &mut buf);
            let key = group.key(&buf);
            if !group.index.contains_key(&key) {
                let idx = group.order() as u32;
                group.index.insert(key, idx);
                group.perms.extend_from_slice(&buf);
            }
        }
        head += 1;
    }
    Ok(group)
}

/// Process-wide cached `W(E6)` / `W(E7)`.
pub fn weyl_group(r: usize) -> Result<Arc<WeylGroup>> {
    static E6: OnceLock<Arc<WeylGroup>> = OnceLock::new();
    static E7: OnceLock<Arc<WeylGroup>> = OnceLock::new();
    let cell = match r {
        6 => &E6,
        7 => &E7,
        _ => return Err(Error::InvalidVector(format!("Weyl group generation supports r = 6, 7 (got {r})"))),
    };
    if let Some(w) = cell.get() {
        return Ok(w.clone());
    }
    let w = Arc::new(generate_weyl(&PicardLattice::new(r)?)?);
    Ok(cell.get_or_init(|| w).clone())
}

/// Adjacency (pairing >= 1) between the line classes.
pub fn meet_graph(lat: &PicardLattice) -> Vec<Vec<bool>> {
    let lines = lat.line_classes();
    lines
        .iter()
        .enumerate()
        .map(|(i, a)| lines.iter().enumerate().map(|(j, b)| i != j && lat.dot(a, b) >= 1).collect())
        .collect()
}

/// Frobenius on `Pic` of the blow-up of `P^2` in closed points of the given
/// degrees: it fixes `e0` and cycles the exceptional classes of each orbit.
pub fn blowup_frobenius(degrees: &[u32]) -> Result<(PicardLattice, Vec<i64>)> {
    let r: u32 = degrees.iter().sum();
    let lat = PicardLattice::new(r as usize)?;
    let n = lat.rank();
    let mut m = vec![0i64; n * n];
    m[0] = 1;
    let mut start = 1usize;
    for &d in degrees {
        let d = d as usize;
        for k in 0..d {
            let from = start + k;
            let to = start + (k + 1) % d;
            m[to * n + from] = 1;
        }
        start += d;
    }
    Ok((lat, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for (r, lines, roots) in [(3, 6, 8), (4, 10, 20), (5, 16, 40), (6, 27, 72), (7, 56, 126)] {
            let lat = PicardLattice::new(r).unwrap();
            assert_eq!(lat.line_classes().len(), lines, "r={r}");
            assert_eq!(lat.roots().len(), roots, "r={r}");
        }
        assert_eq!(PicardLattice::new(8).unwrap().line_classes().len(), 240);
    }

    #[test]
    fn reflections() {
        let lat = PicardLattice::new(6).unwrap();
        let w = reflection(&lat, &[0, 1, -1, 0, 0, 0, 0]).unwrap();
        assert_eq!(w.apply(&lat.basis(1)), lat.basis(2));
        assert_eq!(w.apply(&lat.basis(0)), lat.basis(0));
        let w = reflection(&lat, &[1, -1, -1, -1, 0, 0, 0]).unwrap();
        assert_eq!(w.apply(&lat.basis(0)), vec![2, -1, -1, -1, 0, 0, 0]);
        let ww = mat_mul(&w.matrix, &w.matrix, 7);
        for i in 0..7 {
            assert_eq!(mat_vec(&ww, &lat.basis(i)), lat.basis(i));
        }
        assert!(reflection(&lat, &[0, 1, 0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn e6_group() {
        let w = weyl_group(6).unwrap();
        assert_eq!(w.order(), 51840);
        let lat = w.lattice();
        let k = lat.canonical();
        for i in (0..w.order()).step_by(97) {
            let e = w.element(i);
            assert_eq!(e.apply(&k), k);
            for a in 0..7 {
                for b in 0..7 {
                    assert_eq!(lat.dot(&e.apply(&lat.basis(a)), &e.apply(&lat.basis(b))), lat.dot(&lat.basis(a), &lat.basis(b)));
                }
            }
            for (l, &img) in w.lines().iter().zip(&e.line_perm) {
                assert_eq!(e.apply(l), w.lines()[img as usize]);
            }
        }
    }

    #[test]
    fn schlafli_graph() {
        let lat = PicardLattice::new(6).unwrap();
        let g = meet_graph(&lat);
        assert!(g.iter().all(|row| row.iter().filter(|&&b| b).count() == 10));
        let lines = lat.line_classes();
        let i1 = lines.iter().position(|l| *l == lat.basis(1)).unwrap();
        let i2 = lines.iter().position(|l| *l == lat.basis(2)).unwrap();
        let i12 = lines.iter().position(|l| *l == vec![1, -1, -1, 0, 0, 0, 0]).unwrap();
        assert!(!g[i1][i2]);
        assert!(g[i1][i12]);
    }

    #[test]
    fn blowup_frobenius_trace() {
        let (lat, m) = blowup_frobenius(&[1, 1, 2]).unwrap();
        assert_eq!(lat.r(), 4);
        assert_eq!((0..5).map(|i| m[i * 5 + i]).sum::<i64>(), 3);
    }
}
