//! Points of the projective plane over extensions of `F_q`, Frobenius orbits
//! (closed points) and the general-position predicates.
//!
//! The predicates work on raw coordinate triples inside one field; the
//! typed API lifts every orbit into the compositum `F_{q^L}` first.

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{linalg, make_field, tower_embedding, FieldElement, FieldSpec};

pub type Coords = [u64; 3];

/// Scales so that the first nonzero coordinate is 1. `None` for the zero vector.
pub fn normalize(f: &FieldSpec, c: Coords) -> Option<Coords> {
    let lead = c.iter().copied().find(|&x| x != 0)?;
    if lead == 1 {
        return Some(c);
    }
    let inv = f.inv(lead).expect("nonzero");
    Some([f.mul(c[0], inv), f.mul(c[1], inv), f.mul(c[2], inv)])
}

/// `Frob_q^k` on normalized coordinates (`n` = degree of `F_q` over `F_p`).
#[inline]
pub fn frob_coords(f: &FieldSpec, c: &Coords, n: u32, k: u32) -> Coords {
    let e = n * k;
    [f.frobenius_power(c[0], e), f.frobenius_power(c[1], e), f.frobenius_power(c[2], e)]
}

/// Size of the Frobenius orbit of a normalized point.
pub fn coords_degree(f: &FieldSpec, c: &Coords, n: u32) -> u32 {
    let top = f.degree() / n;
    (1..=top).filter(|k| top % k == 0).find(|&k| frob_coords(f, c, n, k) == *c).unwrap_or(top)
}

/// The Frobenius orbit `c, Frob(c), ...` of a normalized point.
pub fn orbit_coords(f: &FieldSpec, c: &Coords, n: u32) -> Vec<Coords> {
    let mut out = vec![*c];
    let mut x = frob_coords(f, c, n, 1);
    while x != *c {
        out.push(x);
        x = frob_coords(f, &x, n, 1);
    }
    out
}

/// A point of `P^2` with normalized coordinates in some `F_{p^N}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    field: FieldSpec,
    coords: Coords,
}

impl ProjPoint {
    pub fn new(field: &FieldSpec, coords: Coords) -> Result<ProjPoint> {
        if coords.iter().any(|&c| c >= field.order()) {
            return Err(Error::InvalidConfig(format!("coordinate code out of range for {field:?}")));
        }
        let coords = normalize(field, coords).ok_or_else(|| Error::InvalidConfig("all coordinates are zero".into()))?;
        Ok(ProjPoint { field: field.clone(), coords })
    }

    pub fn from_elements(xs: &[FieldElement; 3]) -> Result<ProjPoint> {
        let f = xs[0].field();
        if xs.iter().any(|x| x.field() != f) {
            return Err(Error::FieldMismatch("coordinates live in different fields".into()));
        }
        ProjPoint::new(f, [xs[0].code(), xs[1].code(), xs[2].code()])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn elements(&self) -> [FieldElement; 3] {
        self.coords.map(|c| self.field.element(c))
    }

    fn frobenius(&self, base: &FieldSpec) -> ProjPoint {
        ProjPoint { field: self.field.clone(), coords: frob_coords(&self.field, &self.coords, base.degree(), 1) }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.elements();
        write!(f, "[{x} : {y} : {z}]")
    }
}

fn check_extends(field: &FieldSpec, base: &FieldSpec) -> Result<()> {
    if field.characteristic() != base.characteristic() || field.degree() % base.degree() != 0 {
        return Err(Error::FieldMismatch(format!("{field:?} is not an extension of {base:?}")));
    }
    Ok(())
}

/// A Frobenius orbit of plane points; `rep` is expressed over `F_{q^degree}`.
#[derive(Clone, PartialEq, Eq)]
pub struct ClosedPoint {
    pub rep: ProjPoint,
    pub degree: u32,
    pub orbit: Vec<ProjPoint>,
}

impl fmt::Debug for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} {:?}", self.degree, self.rep)
    }
}

/// The closed point through `p`, re-expressed over its own field of definition.
pub fn frobenius_orbit(p: &ProjPoint, base: &FieldSpec) -> Result<ClosedPoint> {
    check_extends(p.field(), base)?;
    let n = base.degree();
    let e = p.field().degree() / n;
    let d = coords_degree(p.field(), &p.coords, n);
    let own = if d == e {
        p.clone()
    } else {
        let emb = tower_embedding(base, d, e)?;
        let c = p.coords.map(|x| emb.preimage(x).expect("coordinates lie in the field of definition"));
        ProjPoint::new(emb.source(), c)?
    };
    let mut orbit = vec![own.clone()];
    let mut x = own.frobenius(base);
    while x != own {
        orbit.push(x.clone());
        x = x.frobenius(base);
    }
    Ok(ClosedPoint { rep: own, degree: d, orbit })
}

/// Distinct closed points over a common base field, total degree at most 8.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPointConfig {
    base: FieldSpec,
    points: Vec<ClosedPoint>,
}

impl ClosedPointConfig {
    pub fn new(base: &FieldSpec, points: Vec<ClosedPoint>) -> Result<ClosedPointConfig> {
        for cp in &points {
            check_extends(cp.rep.field(), base)?;
            if cp.rep.field().degree() != base.degree() * cp.degree {
                return Err(Error::InvalidConfig("closed point not expressed over its field of definition".into()));
            }
        }
        let total: u32 = points.iter().map(|c| c.degree).sum();
        if total > 8 {
            return Err(Error::InvalidConfig(format!("total degree {total} exceeds 8")));
        }
        let cfg = ClosedPointConfig { base: base.clone(), points };
        let (_, pts) = cfg.expand()?;
        if pts.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(Error::OverlappingOrbits);
        }
        Ok(cfg)
    }

    /// Builds a configuration from one representative per orbit.
    pub fn from_reps(base: &FieldSpec, reps: &[ProjPoint]) -> Result<ClosedPointConfig> {
        let points = reps.iter().map(|p| frobenius_orbit(p, base)).collect::<Result<Vec<_>>>()?;
        ClosedPointConfig::new(base, points)
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn points(&self) -> &[ClosedPoint] {
        &self.points
    }

    /// Orbit degrees, ascending.
    pub fn partition(&self) -> Vec<u32> {
        self.points.iter().map(|c| c.degree).sorted().collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.points.iter().map(|c| c.degree).sum()
    }

    /// `L`, the lcm of the orbit degrees.
    pub fn working_degree(&self) -> u32 {
        self.points.iter().fold(1, |acc, c| num_integer::lcm(acc, c.degree))
    }

    /// All geometric points, lifted into `F_{q^L}`, orbit by orbit.
    pub fn expand(&self) -> Result<(FieldSpec, Vec<Coords>)> {
        let l = self.working_degree();
        let field = FieldSpec::build(self.base.characteristic(), self.base.degree() * l)?;
        let mut out = Vec::with_capacity(self.total_degree() as usize);
        for cp in &self.points {
            let emb = tower_embedding(&self.base, cp.degree, l)?;
            let rep = cp.rep.coords.map(|x| emb.apply(x));
            out.extend(orbit_coords(&field, &rep, self.base.degree()));
        }
        Ok((field, out))
    }

    /// Applies `Frob_q` to every representative (the configuration is unchanged as a set).
    pub fn frobenius(&self) -> ClosedPointConfig {
        let points = self
            .points
            .iter()
            .map(|cp| {
                let rep = cp.rep.frobenius(&self.base);
                frobenius_orbit(&rep, &self.base).expect("same field")
            })
            .collect();
        ClosedPointConfig { base: self.base.clone(), points }
    }
}

fn same_field(pts: &[&ProjPoint]) -> Result<FieldSpec> {
    let f = pts[0].field().clone();
    if pts.iter().any(|p| *p.field() != f) {
        return Err(Error::FieldMismatch("points live in different fields".into()));
    }
    if pts.iter().tuple_combinations().any(|(a, b)| a.coords == b.coords) {
        return Err(Error::NotDistinct);
    }
    Ok(f)
}

pub fn collinear(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<bool> {
    let f = same_field(&[p1, p2, p3])?;
    Ok(collinear_raw(&f, &p1.coords, &p2.coords, &p3.coords))
}

pub fn on_common_conic(pts: &[ProjPoint; 6]) -> Result<bool> {
    let f = same_field(&pts.iter().collect_vec())?;
    let c: Vec<Coords> = pts.iter().map(|p| p.coords).collect();
    Ok(on_conic_raw(&f, &c))
}

/// Whether the eight points lie on a cubic singular at `pts[i]`.
pub fn singular_cubic_through(pts: &[ProjPoint; 8], i: usize) -> Result<bool> {
    if i >= 8 {
        return Err(Error::InvalidConfig(format!("point index {i} out of range")));
    }
    let f = same_field(&pts.iter().collect_vec())?;
    let c: Vec<Coords> = pts.iter().map(|p| p.coords).collect();
    Ok(singular_cubic_raw(&f, &c, i))
}

pub fn is_general_position(config: &ClosedPointConfig) -> Result<bool> {
    let (f, pts) = config.expand()?;
    if pts.iter().tuple_combinations().any(|(a, b)| a == b) {
        return Err(Error::OverlappingOrbits);
    }
    Ok(general_position_raw(&f, &pts))
}

/// All `q^e + 1` points of the conic `xz = y^2` over `F_{q^e}`.
pub fn conic_points(base: &FieldSpec, e: u32) -> Result<Vec<ProjPoint>> {
    if e == 0 {
        return Err(Error::ZeroDegree);
    }
    let f = make_field(base.characteristic(), base.degree() * e)?;
    let mut out: Vec<ProjPoint> =
        (0..f.order()).map(|t| ProjPoint { field: f.clone(), coords: [1, t, f.mul(t, t)] }).collect();
    out.push(ProjPoint { field: f, coords: [0, 0, 1] });
    Ok(out)
}

// ---- raw predicates --------------------------------------------------------

#[inline]
pub fn collinear_raw(f: &FieldSpec, a: &Coords, b: &Coords, c: &Coords) -> bool {
    linalg::det3(f, a, b, c) == 0
}

/// `x^2, y^2, z^2, xy, xz, yz`.
#[inline]
pub fn conic_row(f: &FieldSpec, p: &Coords) -> [u64; 6] {
    let [x, y, z] = *p;
    [f.mul(x, x), f.mul(y, y), f.mul(z, z), f.mul(x, y), f.mul(x, z), f.mul(y, z)]
}

pub fn on_conic_raw(f: &FieldSpec, pts: &[Coords]) -> bool {
    debug_assert_eq!(pts.len(), 6);
    let mut m = [0u64; 36];
    for (r, p) in pts.iter().enumerate() {
        m[r * 6..r * 6 + 6].copy_from_slice(&conic_row(f, p));
    }
    linalg::det_in_place(f, &mut m, 6) == 0
}

/// Cubic monomials, in the order used by [`cubic_row`]:
/// `x^3, y^3, z^3, x^2y, x^2z, y^2x, y^2z, z^2x, z^2y, xyz`.
pub const CUBIC_MONOMIALS: [[u32; 3]; 10] =
    [[3, 0, 0], [0, 3, 0], [0, 0, 3], [2, 1, 0], [2, 0, 1], [1, 2, 0], [0, 2, 1], [1, 0, 2], [0, 1, 2], [1, 1, 1]];

fn monomial(f: &FieldSpec, p: &Coords, e: [u32; 3]) -> u64 {
    (0..3).fold(1, |acc, i| f.mul(acc, f.pow(p[i], e[i] as u128)))
}

pub fn cubic_row(f: &FieldSpec, p: &Coords) -> [u64; 10] {
    CUBIC_MONOMIALS.map(|e| monomial(f, p, e))
}

/// Row of `d/dx_var` of each cubic monomial, evaluated at `p`.
pub fn cubic_partial_row(f: &FieldSpec, p: &Coords, var: usize) -> [u64; 10] {
    CUBIC_MONOMIALS.map(|e| {
        if e[var] == 0 {
            return 0;
        }
        let mut d = e;
        d[var] -= 1;
        f.mul(f.from_int(e[var] as i64), monomial(f, p, d))
    })
}

/// The 11 x 10 matrix `M_i`: eight incidence rows plus the three partials at `pts[i]`.
pub fn cubic_matrix(f: &FieldSpec, pts: &[Coords], i: usize) -> Vec<u64> {
    let mut m = Vec::with_capacity(110);
    for p in pts {
        m.extend_from_slice(&cubic_row(f, p));
    }
    for var in 0..3 {
        m.extend_from_slice(&cubic_partial_row(f, &pts[i], var));
    }
    m
}

pub fn singular_cubic_raw(f: &FieldSpec, pts: &[Coords], i: usize) -> bool {
    debug_assert_eq!(pts.len(), 8);
    let mut m = cubic_matrix(f, pts, i);
    linalg::rank_in_place(f, &mut m, 11, 10) < 10
}

fn six_subsets(n: usize) -> &'static [[usize; 6]] {
    static CACHE: OnceLock<Vec<Vec<[usize; 6]>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=8)
            .map(|k| {
                (0..k)
                    .combinations(6)
                    .map(|c| [c[0], c[1], c[2], c[3], c[4], c[5]])
                    .collect()
            })
            .collect()
    });
    &all[n]
}

/// Tests every subset that contains at least one index `>= first_new`, assuming
/// the points before `first_new` already passed. The cubic condition is
/// checked only when exactly eight points are present. `tests` counts
/// elementary subset tests.
pub fn extends_general_position(f: &FieldSpec, pts: &[Coords], first_new: usize, tests: &mut u64) -> bool {
    let n = pts.len();
    for k in first_new.max(2)..n {
        for j in 1..k {
            for i in 0..j {
                *tests += 1;
                if collinear_raw(f, &pts[i], &pts[j], &pts[k]) {
                    return false;
                }
            }
        }
    }
    if n >= 6 {
        let mut sub = [[0u64; 3]; 6];
        for s in six_subsets(n) {
            if s[5] < first_new {
                continue;
            }
            *tests += 1;
            for (slot, &idx) in sub.iter_mut().zip(s) {
                *slot = pts[idx];
            }
            if on_conic_raw(f, &sub) {
                return false;
            }
        }
    }
    if n == 8 && first_new < 8 {
        for i in 0..8 {
            *tests += 1;
            if singular_cubic_raw(f, pts, i) {
                return false;
            }
        }
    }
    true
}

/// Full general-position test on distinct points in one field.
pub fn general_position_raw(f: &FieldSpec, pts: &[Coords]) -> bool {
    let mut tests = 0;
    extends_general_position(f, pts, 0, &mut tests)
}

// ---- JSON ------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct OrbitEntry {
    degree: u32,
    rep: [String; 3],
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    q: String,
    orbits: Vec<OrbitEntry>,
}

impl Serialize for ClosedPointConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigFile {
            q: self.base.to_string(),
            orbits: self
                .points
                .iter()
                .map(|cp| OrbitEntry { degree: cp.degree, rep: cp.rep.elements().map(|e| e.to_string()) })
                .collect(),
        }
        .serialize(s)
    }
}

impl ClosedPointConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<ClosedPointConfig> {
        let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let base = crate::gf::field_from_order(&file.q)?;
        let mut reps = Vec::new();
        for o in &file.orbits {
            let xs = o
                .rep
                .iter()
                .map(|s| FieldElement::parse(s))
                .collect::<Result<Vec<_>>>()?;
            let p = ProjPoint::from_elements(&[xs[0].clone(), xs[1].clone(), xs[2].clone()])?;
            let cp = frobenius_orbit(&p, &base)?;
            if cp.degree != o.degree {
                return Err(Error::InvalidConfig(format!(
                    "declared degree {} but the point has degree {}",
                    o.degree, cp.degree
                )));
            }
            reps.push(cp);
        }
        ClosedPointConfig::new(&base, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(f: &FieldSpec, c: [i64; 3]) -> ProjPoint {
        ProjPoint::new(f, c.map(|x| f.from_int(x))).unwrap()
    }

    #[test]
    fn frame_is_not_collinear() {
        let f = make_field(5, 1).unwrap();
        assert!(collinear(&pt(&f, [1, 0, 0]), &pt(&f, [0, 1, 0]), &pt(&f, [1, 1, 0])).unwrap());
        assert!(!collinear(&pt(&f, [1, 0, 0]), &pt(&f, [0, 1, 0]), &pt(&f, [0, 0, 1])).unwrap());
        assert_eq!(
            collinear(&pt(&f, [1, 0, 0]), &pt(&f, [2, 0, 0]), &pt(&f, [0, 0, 1])),
            Err(Error::NotDistinct)
        );
    }

    #[test]
    fn degree_two_orbit() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let u = 3; // the generator x of F_9, not in F_3
        let cp = frobenius_orbit(&ProjPoint::new(&f9, [1, u, 0]).unwrap(), &f3).unwrap();
        assert_eq!(cp.degree, 2);
        assert_eq!(cp.orbit.len(), 2);
        // a rational point written over F_9 has degree 1 and is re-expressed over F_3
        let cp = frobenius_orbit(&ProjPoint::new(&f9, [1, 2, 0]).unwrap(), &f3).unwrap();
        assert_eq!(cp.degree, 1);
        assert_eq!(cp.rep.field(), &f3);
    }

    #[test]
    fn conic_points_are_on_conic_and_in_general_position() {
        let f = make_field(7, 1).unwrap();
        let pts = conic_points(&f, 1).unwrap();
        assert_eq!(pts.len(), 8);
        let six: [ProjPoint; 6] = std::array::from_fn(|i| pts[i].clone());
        assert!(on_common_conic(&six).unwrap());
        let five = ClosedPointConfig::from_reps(&f, &pts[..5]).unwrap();
        assert!(is_general_position(&five).unwrap());
        assert_eq!(conic_points(&make_field(3, 1).unwrap(), 2).unwrap().len(), 10);
    }

    #[test]
    fn nodal_cubic_is_detected() {
        // y^2 z = x^3 + x^2 z, node at [0:0:1]; points [t^2-1 : t(t^2-1) : 1]
        let f = make_field(31, 1).unwrap();
        let mut pts = vec![pt(&f, [0, 0, 1])];
        for t in 2..9 {
            pts.push(pt(&f, [t * t - 1, t * (t * t - 1), 1]));
        }
        let arr: [ProjPoint; 8] = pts.try_into().unwrap();
        assert!(singular_cubic_through(&arr, 0).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let deg2 = (0..16).find(|&t| f16.element_degree(t) == 4).unwrap();
        let reps = vec![ProjPoint::new(&f4, [1, 0, 0]).unwrap(), ProjPoint::new(&f16, [1, deg2, 0]).unwrap()];
        let cfg = ClosedPointConfig::from_reps(&f4, &reps).unwrap();
        assert_eq!(cfg.partition(), vec![1, 2]);
        let text = cfg.to_json();
        assert_eq!(ClosedPointConfig::from_json(&text).unwrap(), cfg);
    }
}
