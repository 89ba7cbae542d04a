//! Del Pezzo surfaces of degree 2 and 1 as hypersurfaces in weighted
//! projective space: exact point counts, traces, quadratic twists by the
//! Geiser and Bertini involutions, and conic bundles.
//!
//! Degree 2: `w^2 + f2(x,y,z) w = f4(x,y,z)` in `P(1,1,1,2)`.
//! Degree 1: `w^2 + f1(x,y) z w + f3(x,y) w = z^3 + f2 z^2 + f4 z + f6` in `P(1,1,2,3)`.

pub mod conic;
pub mod explicit;
pub mod form;
mod io;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;

pub use conic::{conic_bundle_analyze, ConicBundleModel, ConicBundleReport, FiberKind};
pub use form::{monomials, Exponents, Form};
pub use io::{conic_bundle_from_json, conic_bundle_to_json, parse_coefficient, surface_from_json, surface_to_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    /// The plane itself (no equation).
    P2,
    /// Degree 2 del Pezzo surfaces.
    P1112,
    /// Degree 1 del Pezzo surfaces.
    P1123,
}

impl Ambient {
    pub fn name(self) -> &'static str {
        match self {
            Ambient::P2 => "P2",
            Ambient::P1112 => "P(1,1,1,2)",
            Ambient::P1123 => "P(1,1,2,3)",
        }
    }

    pub fn parse(text: &str) -> Result<Ambient> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "P2" | "P^2" | "P(1,1,1)" => Ok(Ambient::P2),
            "P(1,1,1,2)" => Ok(Ambient::P1112),
            "P(1,1,2,3)" => Ok(Ambient::P1123),
            _ => Err(Error::Parse(format!("unknown ambient space '{text}'"))),
        }
    }

    /// Number of weight-1 variables.
    pub fn nvars(self) -> usize {
        match self {
            Ambient::P2 | Ambient::P1112 => 3,
            Ambient::P1123 => 2,
        }
    }

    /// Names and degrees of the defining forms.
    pub fn forms(self) -> &'static [(&'static str, u32)] {
        match self {
            Ambient::P2 => &[],
            Ambient::P1112 => &[("f2", 2), ("f4", 4)],
            Ambient::P1123 => &[("f1", 1), ("f2", 2), ("f3", 3), ("f4", 4), ("f6", 6)],
        }
    }

    /// Degree of the del Pezzo surface (9 for the plane).
    pub fn surface_degree(self) -> u32 {
        match self {
            Ambient::P2 => 9,
            Ambient::P1112 => 2,
            Ambient::P1123 => 1,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub ambient: Ambient,
    pub field: FieldSpec,
    /// Every form of the ambient is present (possibly zero).
    pub forms: BTreeMap<String, Form>,
}

impl SurfaceModel {
    /// Model with all forms zero.
    pub fn new(ambient: Ambient, field: &FieldSpec) -> SurfaceModel {
        let forms = ambient.forms().iter().map(|&(n, d)| (n.to_string(), Form::zero(ambient.nvars(), d))).collect();
        SurfaceModel { ambient, field: field.clone(), forms }
    }

    pub fn form(&self, name: &str) -> &Form {
        &self.forms[name]
    }

    /// Replaces a form; its degree and variable count must match the ambient.
    pub fn with_form(mut self, name: &str, form: Form) -> Result<SurfaceModel> {
        let Some(&(_, d)) = self.ambient.forms().iter().find(|(n, _)| *n == name) else {
            return Err(Error::InvalidSurface(format!("{} has no form named {name}", self.ambient)));
        };
        if form.degree != d || form.nvars != self.ambient.nvars() {
            return Err(Error::InvalidSurface(format!("{name} must be a form of degree {d} in {} variables", self.ambient.nvars())));
        }
        if form.terms.values().any(|&c| c >= self.field.order()) {
            return Err(Error::InvalidSurface(format!("{name} has a coefficient outside F_{}", self.field.order())));
        }
        self.forms.insert(name.to_string(), form);
        Ok(self)
    }

    /// Sets one coefficient.
    pub fn with_term(mut self, name: &str, e: Exponents, c: u64) -> Result<SurfaceModel> {
        let mut f = self.forms.get(name).cloned().ok_or_else(|| Error::InvalidSurface(format!("{} has no form named {name}", self.ambient)))?;
        f.set(e, c)?;
        self.forms.insert(name.to_string(), f);
        Ok(self)
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ambient {
            Ambient::P2 => write!(f, "P2 over F_{}", self.q()),
            Ambient::P1112 => write!(f, "w^2 + ({}) w = {} over F_{}", self.form("f2"), self.form("f4"), self.q()),
            Ambient::P1123 => write!(
                f,
                "w^2 + ({}) z w + ({}) w = z^3 + ({}) z^2 + ({}) z + {} over F_{}",
                self.form("f1"),
                self.form("f3"),
                self.form("f2"),
                self.form("f4"),
                self.form("f6"),
                self.q()
            ),
        }
    }
}

/// Result of a point count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub q: u64,
    pub count: u64,
    /// `(count - 1 - q^2) / q` when it is an integer.
    pub trace: Option<i64>,
    /// Whether `count = 1 + a q + q^2` for an integer `a`.
    pub integral: bool,
}

impl CountReport {
    pub fn new(q: u64, count: u64) -> CountReport {
        let num = count as i128 - 1 - (q as i128) * (q as i128);
        let integral = num % q as i128 == 0;
        CountReport { q, count, trace: integral.then(|| (num / q as i128) as i64), integral }
    }
}

/// `1 + a q + q^2`, or `None` if negative.
pub fn count_from_trace(q: u64, a: i64) -> Option<u64> {
    let v = 1 + a as i128 * q as i128 + (q as i128) * (q as i128);
    u64::try_from(v).ok()
}

/// Trace after blowing up a closed point of degree `d`: a rational point
/// is replaced by a line, adding one to the trace; other points add nothing.
pub fn blowup_trace(a: i64, d: u32) -> i64 {
    if d == 1 {
        a + 1
    } else {
        a
    }
}

/// Trace of the plane.
pub const PLANE_TRACE: i64 = 1;

/// Trace of the blow-up of the plane in closed points of the given degrees.
pub fn blowup_trace_partition(degrees: &[u32]) -> i64 {
    degrees.iter().fold(PLANE_TRACE, |a, &d| blowup_trace(a, d))
}

/// Number of `w` in `F_q` with `w^2 + b w = c`.
pub fn quadratic_solutions(f: &FieldSpec, b: u64, c: u64) -> u64 {
    if f.characteristic() == 2 {
        if b == 0 {
            return 1;
        }
        let t = f.div(c, f.mul(b, b)).expect("b nonzero");
        if f.absolute_trace(t) == 0 {
            2
        } else {
            0
        }
    } else {
        let disc = f.add(f.mul(b, b), f.mul(f.from_int(4), c));
        if disc == 0 {
            1
        } else if f.is_square(disc) {
            2
        } else {
            0
        }
    }
}

/// Normalized points of `P^{n-1}(F_q)`: first nonzero coordinate 1.
pub fn projective_points(f: &FieldSpec, n: usize) -> Vec<Vec<u64>> {
    let q = f.order();
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        let total = q.pow(tail as u32);
        for idx in 0..total {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            let mut c = idx;
            for slot in v.iter_mut().skip(lead + 1).rev() {
                *slot = c % q;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Exact number of `F_q`-points.
pub fn count_points(s: &SurfaceModel) -> Result<CountReport> {
    let f = &s.field;
    let q = f.order();
    q.checked_pow(4).ok_or(Error::Overflow("point count"))?;
    let count = match s.ambient {
        Ambient::P2 => q * q + q + 1,
        Ambient::P1112 => {
            let (f2, f4) = (s.form("f2"), s.form("f4"));
            // (0:0:0:1) never lies on w^2 + f2 w = f4
            projective_points(f, 3).par_iter().map(|p| quadratic_solutions(f, f2.eval(f, p), f4.eval(f, p))).sum()
        }
        Ambient::P1123 => {
            let [f1, f2, f3, f4, f6] = ["f1", "f2", "f3", "f4", "f6"].map(|n| s.form(n));
            let fibres: u64 = projective_points(f, 2)
                .par_iter()
                .map(|p| {
                    let c = [f1, f2, f3, f4, f6].map(|g| g.eval(f, p));
                    (0..q)
                        .map(|z| {
                            let b = f.add(f.mul(c[0], z), c[2]);
                            let z2 = f.mul(z, z);
                            let rhs = f.add(f.add(f.mul(z2, z), f.mul(c[1], z2)), f.add(f.mul(c[3], z), c[4]));
                            quadratic_solutions(f, b, rhs)
                        })
                        .sum::<u64>()
                })
                .sum();
            // over x = y = 0 the equation is w^2 = z^3: the single point j = 1 of P(2,3)
            fibres + 1
        }
    };
    Ok(CountReport::new(q, count))
}

/// Closed-form number of points of the ambient space.
pub fn ambient_count(ambient: Ambient, q: u64) -> u64 {
    match ambient {
        Ambient::P2 => q * q + q + 1,
        Ambient::P1112 | Ambient::P1123 => q * q * q + q * q + q + 1,
    }
}

/// Number of points of `P(w_0, ..., w_k)(F_q)` by brute force. Two nonzero
/// tuples give the same point when they have the same support and agree on
/// every invariant `v_i^(w_j/g) / v_j^(w_i/g)`, `g = gcd(w_i, w_j)`, i.e. when
/// they are related by a scalar over the algebraic closure. Used to validate
/// the normalization behind [`count_points`].
pub fn weighted_projective_count(f: &FieldSpec, weights: &[u32]) -> Result<u64> {
    let q = f.order();
    let n = weights.len();
    let total = q.checked_pow(n as u32).filter(|&t| t <= 1 << 22).ok_or(Error::Overflow("weighted projective count"))?;
    let mut classes = std::collections::HashSet::new();
    for mut idx in 1..total {
        let mut v = vec![0u64; n];
        for slot in v.iter_mut() {
            *slot = idx % q;
            idx /= q;
        }
        let support: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        let mut key = vec![support.iter().fold(0u64, |m, &i| m | 1 << i)];
        for (a, &i) in support.iter().enumerate() {
            for &j in &support[a + 1..] {
                let g = num_integer::gcd(weights[i], weights[j]);
                let num = f.pow(v[i], (weights[j] / g) as u128);
                let den = f.pow(v[j], (weights[i] / g) as u128);
                key.push(f.div(num, den)?);
            }
        }
        classes.insert(key);
    }
    Ok(classes.len() as u64)
}

/// Whether `alpha` gives the trivial quadratic twist: a square for odd `q`,
/// absolute trace 0 for even `q`.
pub fn is_trivial_twist(f: &FieldSpec, alpha: u64) -> bool {
    if f.characteristic() == 2 {
        f.absolute_trace(alpha) == 0
    } else {
        f.is_square(alpha)
    }
}

/// Least element (by code) giving the nontrivial twist.
pub fn twist_parameter(f: &FieldSpec) -> u64 {
    (1..f.order()).find(|&a| !is_trivial_twist(f, a)).expect("every finite field has a nontrivial quadratic twist")
}

/// Quadratic twist by `alpha` without checking its class. For odd `q`
/// `alpha` must be nonzero.
pub fn twist(s: &SurfaceModel, alpha: u64) -> Result<SurfaceModel> {
    let f = &s.field;
    if alpha >= f.order() {
        return Err(Error::FieldMismatch(format!("twist parameter {alpha} is not in F_{}", f.order())));
    }
    if f.characteristic() != 2 && alpha == 0 {
        return Err(Error::DivisionByZero);
    }
    let odd = f.characteristic() != 2;
    let half = if odd { f.inv(f.from_int(2)) } else { None };
    let quarter = half.map(|h| f.mul(h, h));
    let mut out = s.clone();
    match s.ambient {
        Ambient::P2 => return Err(Error::InvalidSurface("the plane has no quadratic twist".into())),
        Ambient::P1112 => {
            let (f2, f4) = (s.form("f2"), s.form("f4"));
            if let Some(quarter) = quarter {
                // (w + f2/2)^2 = f4 + f2^2/4, then alpha w^2 = ...
                let full = f4.add(f, &f2.mul(f, f2).scale(f, quarter));
                out.forms.insert("f2".into(), Form::zero(3, 2));
                out.forms.insert("f4".into(), full.scale(f, alpha));
            } else {
                out.forms.insert("f4".into(), f4.add(f, &f2.mul(f, f2).scale(f, alpha)));
            }
        }
        Ambient::P1123 => {
            let [f1, f2, f3, f4, f6] = ["f1", "f2", "f3", "f4", "f6"].map(|n| s.form(n));
            if let (Some(half), Some(quarter)) = (half, quarter) {
                let a2 = f2.add(f, &f1.mul(f, f1).scale(f, quarter));
                let a4 = f4.add(f, &f1.mul(f, f3).scale(f, half));
                let a6 = f6.add(f, &f3.mul(f, f3).scale(f, quarter));
                let a2x = f.mul(alpha, alpha);
                out.forms.insert("f1".into(), Form::zero(2, 1));
                out.forms.insert("f3".into(), Form::zero(2, 3));
                out.forms.insert("f2".into(), a2.scale(f, alpha));
                out.forms.insert("f4".into(), a4.scale(f, a2x));
                out.forms.insert("f6".into(), a6.scale(f, f.mul(a2x, alpha)));
            } else {
                // Artin-Schreier shift of the right-hand side by alpha (f1 z + f3)^2
                out.forms.insert("f2".into(), f2.add(f, &f1.mul(f, f1).scale(f, alpha)));
                out.forms.insert("f6".into(), f6.add(f, &f3.mul(f, f3).scale(f, alpha)));
            }
        }
    }
    Ok(out)
}

fn checked_twist(s: &SurfaceModel, alpha: u64, ambient: Ambient, name: &str) -> Result<SurfaceModel> {
    if s.ambient != ambient {
        return Err(Error::InvalidSurface(format!("{name} twist needs a surface in {ambient}, got {}", s.ambient)));
    }
    if alpha < s.field.order() && is_trivial_twist(&s.field, alpha) {
        return Err(Error::TrivialTwist(format!(
            "{} is in the trivial class of F_{}",
            s.field.element(alpha),
            s.field.order()
        )));
    }
    twist(s, alpha)
}

/// Nontrivial twist of a degree 2 surface by the Geiser involution.
pub fn geiser_twist(s: &SurfaceModel, alpha: u64) -> Result<SurfaceModel> {
    checked_twist(s, alpha, Ambient::P1112, "Geiser")
}

/// Nontrivial twist of a degree 1 surface by the Bertini involution.
pub fn bertini_twist(s: &SurfaceModel, alpha: u64) -> Result<SurfaceModel> {
    checked_twist(s, alpha, Ambient::P1123, "Bertini")
}

/// Random model with every coefficient uniform, resampled until the count
/// gives an integral trace (at most `tries` attempts).
pub fn random_model<R: Rng + ?Sized>(ambient: Ambient, f: &FieldSpec, rng: &mut R, tries: usize) -> Result<SurfaceModel> {
    for _ in 0..tries {
        let mut s = SurfaceModel::new(ambient, f);
        for &(name, d) in ambient.forms() {
            s.forms.insert(name.to_string(), Form::random(f, ambient.nvars(), d, rng));
        }
        if count_points(&s)?.integral {
            return Ok(s);
        }
    }
    Err(Error::InvalidSurface(format!("no model in {ambient} over F_{} with integral trace after {tries} draws", f.order())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ambient_counts_match_enumeration() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = make_field(p, n).unwrap();
            let q = f.order();
            assert_eq!(weighted_projective_count(&f, &[1, 1, 1, 2]).unwrap(), ambient_count(Ambient::P1112, q));
            assert_eq!(weighted_projective_count(&f, &[1, 1, 2, 3]).unwrap(), ambient_count(Ambient::P1123, q));
            assert_eq!(weighted_projective_count(&f, &[1, 1, 2]).unwrap(), q * q + q + 1);
            assert_eq!(weighted_projective_count(&f, &[2, 3]).unwrap(), q + 1);
            assert_eq!(projective_points(&f, 3).len() as u64, q * q + q + 1);
        }
    }

    #[test]
    fn quadratic_solutions_brute_force() {
        for (p, n) in [(2, 2), (3, 1), (5, 1), (3, 2)] {
            let f = make_field(p, n).unwrap();
            for b in 0..f.order() {
                for c in 0..f.order() {
                    let brute = (0..f.order()).filter(|&w| f.add(f.mul(w, w), f.mul(b, w)) == c).count() as u64;
                    assert_eq!(quadratic_solutions(&f, b, c), brute);
                }
            }
        }
    }

    #[test]
    fn blowup_arithmetic() {
        assert_eq!(blowup_trace(6, 1), 7);
        assert_eq!(blowup_trace(5, 2), 5);
        assert_eq!(blowup_trace_partition(&[1, 1, 1, 1, 1, 1]), 7);
        assert_eq!(blowup_trace_partition(&[2, 2, 3]), 1);
        assert_eq!(CountReport::new(3, 25).trace, Some(5));
        assert!(!CountReport::new(3, 24).integral);
    }

    #[test]
    fn twist_sum_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2, 1), (3, 1), (2, 2)] {
            let f = make_field(p, n).unwrap();
            let alpha = twist_parameter(&f);
            for ambient in [Ambient::P1112, Ambient::P1123] {
                let s = random_model(ambient, &f, &mut rng, 100).unwrap();
                let t = twist(&s, alpha).unwrap();
                let q = f.order();
                assert_eq!(count_points(&s).unwrap().count + count_points(&t).unwrap().count, 2 * (q * q + q + 1));
            }
        }
    }

    #[test]
    fn trivial_twist_is_rejected() {
        let f = make_field(5, 1).unwrap();
        let s = SurfaceModel::new(Ambient::P1112, &f).with_term("f4", vec![4, 0, 0], 1).unwrap();
        assert!(matches!(geiser_twist(&s, 4), Err(Error::TrivialTwist(_))));
        assert!(geiser_twist(&s, 2).is_ok());
        assert!(matches!(bertini_twist(&s, 2), Err(Error::InvalidSurface(_))));
    }
}
