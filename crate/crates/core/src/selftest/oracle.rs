//! Incidence oracle for the general-position predicates that uses no
//! determinants: lines are found by enumerating all of `P^2(F_Q)`, and the
//! conic through five points comes from the pencil spanned by two pairs of
//! lines through four of them.

use rand::Rng;

use crate::gf::FieldSpec;
use crate::plane::{normalize, orbit_coords, Coords};

fn eval_line(f: &FieldSpec, l: &Coords, p: &Coords) -> u64 {
    f.add(f.add(f.mul(l[0], p[0]), f.mul(l[1], p[1])), f.mul(l[2], p[2]))
}

/// All lines of `P^2(F_Q)` with the set of configuration points on each,
/// as bitmasks over `pts`.
pub struct Incidence {
    lines: Vec<Coords>,
    masks: Vec<u32>,
}

impl Incidence {
    pub fn new(f: &FieldSpec, pts: &[Coords]) -> Incidence {
        assert!(pts.len() <= 32);
        let q = f.order();
        let mut lines = Vec::with_capacity((q * q + q + 1) as usize);
        lines.push([0, 0, 1]);
        lines.extend((0..q).map(|c| [0, 1, c]));
        for b in 0..q {
            lines.extend((0..q).map(|c| [1, b, c]));
        }
        let masks = lines
            .iter()
            .map(|l| pts.iter().enumerate().filter(|(_, p)| eval_line(f, l, p) == 0).fold(0u32, |m, (i, _)| m | 1 << i))
            .collect();
        Incidence { lines, masks }
    }

    pub fn collinear(&self, idx: &[usize]) -> bool {
        let want = idx.iter().fold(0u32, |m, &i| m | 1 << i);
        self.masks.iter().any(|&m| m & want == want)
    }

    /// The line through two distinct points.
    fn line_through(&self, i: usize, j: usize) -> &Coords {
        let want = 1u32 << i | 1 << j;
        let k = self.masks.iter().position(|&m| m & want == want).expect("two distinct points span a line");
        &self.lines[k]
    }

    /// Whether the six points `idx` lie on a common (possibly degenerate) conic.
    pub fn on_conic(&self, f: &FieldSpec, pts: &[Coords], idx: &[usize; 6]) -> bool {
        let all = idx.iter().fold(0u32, |m, &i| m | 1 << i);
        // a conic meeting a line in three points contains it; the rest must then be collinear
        for &m in &self.masks {
            let on = m & all;
            if on.count_ones() >= 3 {
                let off: Vec<usize> = idx.iter().copied().filter(|&i| on & (1 << i) == 0).collect();
                if off.len() <= 2 || self.collinear(&off) {
                    return true;
                }
            }
        }
        if self.masks.iter().any(|&m| (m & all).count_ones() >= 3) {
            return false;
        }
        // no three collinear: the conics through p1..p4 are lam*L12*L34 + mu*L13*L24
        let [a, b, c, d, e, g] = *idx;
        let pair = |x: usize, y: usize, z: usize, w: usize, p: &Coords| {
            f.mul(eval_line(f, self.line_through(x, y), p), eval_line(f, self.line_through(z, w), p))
        };
        let (u, v) = (pair(a, b, c, d, &pts[e]), pair(a, c, b, d, &pts[e]));
        // the unique member through p5 is v*D1 - u*D2
        let (u6, v6) = (pair(a, b, c, d, &pts[g]), pair(a, c, b, d, &pts[g]));
        f.sub(f.mul(v, u6), f.mul(u, v6)) == 0
    }
}

/// A random configuration of distinct points of `P^2(F_Q)`, `Q = q^e`, with
/// at most `max` points. Points are either unions of Frobenius orbits over
/// `F_q` or planted on a random line or conic, so degenerate cases are common.
pub fn random_points<R: Rng + ?Sized>(big: &FieldSpec, base_degree: u32, max: usize, rng: &mut R) -> Vec<Coords> {
    let q = big.order();
    let target = rng.gen_range(3..=max);
    let mut pts: Vec<Coords> = Vec::with_capacity(max);
    let random_point = |rng: &mut R| loop {
        if let Some(c) = normalize(big, [rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q)]) {
            return c;
        }
    };
    let mode = rng.gen_range(0..3);
    let mut guard = 0;
    while pts.len() < target && guard < 10_000 {
        guard += 1;
        let cand: Vec<Coords> = match mode {
            0 => orbit_coords(big, &random_point(rng), base_degree),
            1 if pts.len() >= 2 && rng.gen_bool(0.5) => {
                // a point on the line through two chosen points
                let (i, j) = (rng.gen_range(0..pts.len()), rng.gen_range(0..pts.len()));
                let t = rng.gen_range(0..q);
                let c = [0, 1, 2].map(|k| big.add(pts[i][k], big.mul(t, pts[j][k])));
                normalize(big, c).into_iter().collect()
            }
            2 => {
                // on the conic xz = y^2 (or a random point)
                if rng.gen_bool(0.7) {
                    let t = rng.gen_range(0..=q);
                    vec![if t == q { [0, 0, 1] } else { [1, t, big.mul(t, t)] }]
                } else {
                    vec![random_point(rng)]
                }
            }
            _ => vec![random_point(rng)],
        };
        if pts.len() + cand.len() <= max && cand.iter().all(|c| !pts.contains(c)) {
            pts.extend(cand);
        }
    }
    pts
}
