//! Enumeration of plane points and closed points inside a fixed working field `F_{q^L}`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{tower_embedding, FieldSpec};
use crate::plane::{coords_degree, frobenius_orbit, normalize, orbit_coords, ClosedPointConfig, Coords, ProjPoint};

/// Largest number of points of `P^2(F_{q^d})` we are willing to scan to list closed points.
pub const SCAN_LIMIT: u64 = 1 << 24;

pub(crate) struct Space {
    pub base: FieldSpec,
    pub n: u32,
    pub l: u32,
    pub field: FieldSpec,
    bases: BTreeMap<u32, Vec<u64>>,
}

impl Space {
    pub fn new(base: &FieldSpec, l: u32, degrees: &[u32]) -> Result<Space> {
        let field = FieldSpec::build(base.characteristic(), base.degree() * l)?;
        let mut bases = BTreeMap::new();
        for &d in degrees {
            if !bases.contains_key(&d) {
                bases.insert(d, field.subfield_basis(base.degree() * d)?);
            }
        }
        Ok(Space { base: base.clone(), n: base.degree(), l, field, bases })
    }

    pub fn subfield(&self, d: u32) -> Result<Vec<u64>> {
        self.field.subfield_elements(self.n * d)
    }

    /// Points of `P^2(F_{q^d})`, sorted by coordinate codes.
    pub fn plane_points(&self, d: u32) -> Result<Vec<Coords>> {
        let s = self.subfield(d)?;
        let mut out = Vec::with_capacity(s.len() * s.len() + s.len() + 1);
        out.push([0, 0, 1]);
        out.extend(s.iter().map(|&z| [0, 1, z]));
        for &y in &s {
            out.extend(s.iter().map(|&z| [1, y, z]));
        }
        Ok(out)
    }

    pub fn rational_points(&self) -> Vec<Coords> {
        self.plane_points(1).expect("base field is a subfield")
    }

    pub fn scan_size(&self, d: u32) -> u64 {
        let qd = self.base.order().saturating_pow(d);
        qd.saturating_mul(qd).saturating_add(qd).saturating_add(1)
    }

    pub fn degree_of(&self, c: &Coords) -> u32 {
        coords_degree(&self.field, c, self.n)
    }

    /// Least point (in code order) of the Frobenius orbit.
    pub fn canonical(&self, c: &Coords) -> Coords {
        orbit_coords(&self.field, c, self.n).into_iter().min().expect("nonempty orbit")
    }

    /// Canonical representatives of all closed points of exact degree `d`, ascending.
    pub fn orbit_reps(&self, d: u32) -> Result<Vec<Coords>> {
        if self.scan_size(d) > SCAN_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "closed points of degree {d} over F_{}: scan of {} points exceeds the limit",
                self.base.order(),
                self.scan_size(d)
            )));
        }
        if d == 1 {
            return Ok(self.rational_points());
        }
        let primes: Vec<u32> = (2..=d).filter(|r| d % r == 0 && (2..*r).all(|s| r % s != 0)).collect();
        let mut out = Vec::new();
        for c in self.plane_points(d)? {
            let proper = primes.iter().any(|r| crate::plane::frob_coords(&self.field, &c, self.n, d / r) == c);
            if proper {
                continue;
            }
            if orbit_coords(&self.field, &c, self.n).iter().all(|o| *o >= c) {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// A random normalized point with coordinates in `F_{q^d}` (any degree dividing `d`).
    pub fn random_point<R: Rng + ?Sized>(&self, d: u32, rng: &mut R) -> Coords {
        let basis = &self.bases[&d];
        let p = self.field.characteristic();
        loop {
            let c: Coords = std::array::from_fn(|_| {
                basis.iter().fold(0, |acc, &b| {
                    let k = rng.gen_range(0..p);
                    if k == 0 {
                        acc
                    } else {
                        self.field.add(acc, self.field.mul(k, b))
                    }
                })
            });
            if let Some(c) = normalize(&self.field, c) {
                return c;
            }
        }
    }

    /// Converts `(degree, coords in F_{q^L})` representatives into a typed configuration.
    pub fn to_config(&self, reps: &[(u32, Coords)]) -> Result<ClosedPointConfig> {
        let mut reps: Vec<(u32, Coords)> = reps.iter().map(|&(d, c)| (d, self.canonical(&c))).collect();
        reps.sort();
        let mut points = Vec::with_capacity(reps.len());
        for (d, c) in reps {
            let emb = tower_embedding(&self.base, d, self.l)?;
            let own = c.map(|x| emb.preimage(x).expect("coordinates lie in F_{q^d}"));
            let p = ProjPoint::new(emb.source(), own)?;
            points.push(frobenius_orbit(&p, &self.base)?);
        }
        ClosedPointConfig::new(&self.base, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    // Number of closed points of degree d in P^2 over F_q, by Moebius inversion
    // of #P^2(F_{q^d}) = q^{2d} + q^d + 1.
    fn closed_point_count(q: u64, d: u32) -> u64 {
        let mu = |m: u32| -> i64 {
            let mut m = m;
            let mut r = 1;
            let mut p = 2;
            while m > 1 {
                if m % p == 0 {
                    m /= p;
                    if m % p == 0 {
                        return 0;
                    }
                    r = -r;
                }
                p += 1;
            }
            r
        };
        let total: i64 = (1..=d)
            .filter(|k| d % k == 0)
            .map(|k| {
                let qk = q.pow(k) as i64;
                mu(d / k) * (qk * qk + qk + 1)
            })
            .sum();
        (total / d as i64) as u64
    }

    #[test]
    fn closed_point_counts_match_moebius() {
        for (p, n, d) in [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (2, 2, 2), (2, 1, 6), (3, 1, 3)] {
            let base = make_field(p, n).unwrap();
            let sp = Space::new(&base, d, &[d]).unwrap();
            let reps = sp.orbit_reps(d).unwrap();
            assert_eq!(reps.len() as u64, closed_point_count(base.order(), d), "q={p}^{n} d={d}");
        }
    }
}
