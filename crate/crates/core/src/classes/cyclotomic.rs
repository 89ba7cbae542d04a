//! Characteristic polynomials of integer matrices and their factorisation
//! into cyclotomic polynomials.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer polynomial, lowest degree first.
pub type IntPoly = Vec<i64>;

/// `det(x I - A)` by Faddeev–LeVerrier (exact: each division is by `k`).
pub fn charpoly(a: &[i64], n: usize) -> IntPoly {
    let mut c = vec![0i64; n + 1];
    c[n] = 1;
    let mut m = vec![0i64; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = crate::lattice::mat_mul(a, &m, n);
        for i in 0..n {
            next[i * n + i] += c[n - k + 1];
        }
        let am = crate::lattice::mat_mul(a, &next, n);
        let tr: i64 = (0..n).map(|i| am[i * n + i]).sum();
        debug_assert_eq!(tr % k as i64, 0);
        c[n - k] = -tr / k as i64;
        m = next;
    }
    c
}

fn poly_mul(a: &[i64], b: &[i64]) -> IntPoly {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial; `None` if the remainder is nonzero.
fn poly_div_exact(a: &[i64], b: &[i64]) -> Option<IntPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return None;
    }
    let mut q = vec![0i64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, &y) in b.iter().enumerate() {
            r[i + j] -= c * y;
        }
    }
    r.iter().all(|&x| x == 0).then_some(q)
}

/// `Phi_n` by dividing `x^n - 1` by `Phi_d` for the proper divisors `d`.
pub fn cyclotomic(n: u32) -> IntPoly {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        p = poly_div_exact(&p, &cyclotomic(d)).expect("Phi_d divides x^n - 1");
    }
    p
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u32
}

/// Multiset `{n^b}`: `b` eigenvalues are primitive `n`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenSignature(pub Vec<(u32, u32)>);

impl EigenSignature {
    pub fn dimension(&self) -> u32 {
        self.0.iter().map(|&(_, b)| b).sum()
    }

    /// Sum of the eigenvalues: `b / phi(n) * mu(n)` per entry (Ramanujan sum at 1).
    pub fn trace(&self) -> i64 {
        self.0.iter().map(|&(n, b)| (b / euler_phi(n)) as i64 * mobius(n)).sum()
    }

    /// `prod Phi_n^{b / phi(n)}`.
    pub fn polynomial(&self) -> IntPoly {
        let mut p = vec![1i64];
        for &(n, b) in &self.0 {
            for _ in 0..b / euler_phi(n) {
                p = poly_mul(&p, &cyclotomic(n));
            }
        }
        p
    }

    /// Signature after multiplying the characteristic polynomial by `(x - 1)`.
    pub fn with_extra_one(&self) -> EigenSignature {
        let mut v = self.0.clone();
        match v.iter_mut().find(|(n, _)| *n == 1) {
            Some(e) => e.1 += 1,
            None => v.insert(0, (1, 1)),
        }
        EigenSignature(v)
    }

    pub fn parse(text: &str) -> Result<EigenSignature> {
        let mut v: Vec<(u32, u32)> = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (n, b) = tok.split_once('^').unwrap_or((tok, "1"));
            let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad eigenvalue entry '{tok}'")))?;
            let b: u32 = b.trim().parse().map_err(|_| Error::Parse(format!("bad eigenvalue entry '{tok}'")))?;
            v.push((n, b));
        }
        v.sort_unstable();
        Ok(EigenSignature(v))
    }
}

fn mobius(n: u32) -> i64 {
    let mut m = n;
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
}

impl fmt::Display for EigenSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|&(n, b)| if b == 1 { n.to_string() } else { format!("{n}^{b}") }).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for EigenSignature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Factor a characteristic polynomial completely into cyclotomic factors.
pub fn eigen_signature(poly: &[i64]) -> Result<EigenSignature> {
    let mut p = poly.to_vec();
    let mut out = Vec::new();
    let deg = p.len() as u32 - 1;
    for n in 1..=4 * deg.max(1) * deg.max(1) {
        let phi = euler_phi(n);
        if phi > deg {
            continue;
        }
        let c = cyclotomic(n);
        let mut mult = 0;
        while p.len() > 1 {
            match poly_div_exact(&p, &c) {
                Some(q) => {
                    p = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            out.push((n, mult * phi));
        }
    }
    if p != [1] {
        return Err(Error::Consistency(format!("non-cyclotomic factor {p:?} in characteristic polynomial")));
    }
    Ok(EigenSignature(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn charpoly_of_rotation() {
        // rotation of order 3 on Z^2 plus a fixed vector
        let a = [0, -1, 0, 1, -1, 0, 0, 0, 1];
        let p = charpoly(&a, 3);
        let sig = eigen_signature(&p).unwrap();
        assert_eq!(sig.to_string(), "1,3^2");
        assert_eq!(sig.trace(), 0);
        assert_eq!(sig.polynomial(), p);
    }

    #[test]
    fn signature_parse_roundtrip() {
        let s = EigenSignature::parse("1^2,2,8^4").unwrap();
        assert_eq!(s.to_string(), "1^2,2,8^4");
        assert_eq!(s.dimension(), 7);
        assert_eq!(s.trace(), 1);
    }
}
