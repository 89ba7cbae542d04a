use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{linalg, Extension, FieldSpec};
use crate::error::Result;

/// Candidates tried in code order before switching to a seeded random sequence.
const ORDERED_CANDIDATES: u64 = 64;

/// `alpha` whose conjugates `alpha^(q^i)`, `0 <= i < degree`, form an `F_q`-basis of `F_{q^degree}`.
#[derive(Clone, Debug)]
pub struct NormalBasis {
    pub base: FieldSpec,
    pub degree: u32,
    pub extension: Extension,
    pub generator: u64,
}

impl NormalBasis {
    pub fn field(&self) -> &FieldSpec {
        &self.extension.field
    }

    /// `alpha, alpha^q, ..., alpha^(q^(d-1))` as codes of the extension field.
    pub fn conjugates(&self) -> Vec<u64> {
        conjugates(self.field(), self.base.degree(), self.generator, self.degree)
    }
}

fn conjugates(big: &FieldSpec, base_degree: u32, alpha: u64, d: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(d as usize);
    let mut x = alpha;
    for _ in 0..d {
        out.push(x);
        x = big.frobenius_power(x, base_degree);
    }
    out
}

/// Moore-type test: the conjugates are independent over `F_q` iff the
/// `d x d` matrix `(alpha^(q^(i+j)))` is nonsingular.
pub fn is_normal(big: &FieldSpec, base_degree: u32, alpha: u64, d: u32) -> bool {
    if alpha == 0 {
        return false;
    }
    let conj = conjugates(big, base_degree, alpha, d);
    let n = d as usize;
    let mut m = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = conj[(i + j) % n];
        }
    }
    linalg::det_in_place(big, &mut m, n) != 0
}

/// A normal element, chosen deterministically: the first few codes in order,
/// then a fixed-seed random sequence. Code order alone is hopeless for
/// binomial moduli, where every power of the root spans a Frobenius-stable
/// line and normal elements need all coordinates nonzero.
pub fn find_normal_basis(base: &FieldSpec, d: u32) -> Result<NormalBasis> {
    let extension = base.extension(d)?;
    let big = &extension.field;
    let order = big.order();
    let mut rng = ChaCha8Rng::seed_from_u64(order);
    let generator = (1..order.min(ORDERED_CANDIDATES))
        .chain(std::iter::repeat_with(|| rng.gen_range(1..order)))
        .find(|&a| is_normal(big, base.degree(), a, d))
        .expect("normal bases exist for every finite extension");
    Ok(NormalBasis { base: base.clone(), degree: d, extension, generator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{fp, make_field};

    // Independent check: F_p-rank of { beta_k * alpha^(q^i) } must be n*d,
    // where beta_k runs over an F_p-basis of the embedded base field.
    fn fp_rank_oracle(nb: &NormalBasis) -> usize {
        let big = nb.field();
        let p = big.characteristic();
        let n = nb.base.degree();
        let rows: Vec<Vec<u64>> = nb
            .conjugates()
            .iter()
            .flat_map(|&c| {
                (0..n).map(move |k| {
                    let beta = nb.extension.embedding.apply(p.pow(k));
                    big.digits(big.mul(beta, c))
                })
            })
            .collect();
        fp::rank(&rows, p)
    }

    #[test]
    fn degree_one_is_one() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(find_normal_basis(&f, 1).unwrap().generator, 1);
    }

    #[test]
    fn small_cases_pass_oracle() {
        for (p, n, d) in [(2, 1, 6), (3, 1, 2), (2, 2, 3), (3, 1, 7), (2, 1, 8), (5, 1, 4), (2, 2, 4)] {
            let f = make_field(p, n).unwrap();
            let nb = find_normal_basis(&f, d).unwrap();
            assert_eq!(fp_rank_oracle(&nb), (n * d) as usize, "q={p}^{n} d={d}");
        }
    }

    #[test]
    fn f9_over_f3_has_nonzero_trace() {
        let f = make_field(3, 1).unwrap();
        let nb = find_normal_basis(&f, 2).unwrap();
        let big = nb.field();
        let a = nb.generator;
        assert_ne!(big.add(a, big.pow(a, 3)), 0);
        assert_ne!(big.pow(a, 3), a);
    }

    #[test]
    fn non_normal_elements_fail_oracle() {
        // every element of F_4 inside F_16 has dependent conjugates over F_2 in degree 4
        let f2 = make_field(2, 1).unwrap();
        let ext = f2.extension(4).unwrap();
        for a in ext.field.subfield_elements(2).unwrap() {
            assert!(!is_normal(&ext.field, 1, a, 4));
        }
    }
}
