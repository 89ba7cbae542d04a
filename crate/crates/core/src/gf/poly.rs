//! Univariate polynomials over a [`FieldSpec`], coefficients as codes in
//! ascending degree. The zero polynomial is the empty vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FieldSpec;
use crate::error::{Error, Result};

pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(f: &FieldSpec, a: &[u64], c: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &FieldSpec, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    let db = degree(b).ok_or(Error::DivisionByZero)?;
    let lead_inv = f.inv(b[db]).ok_or(Error::DivisionByZero)?;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut quot = vec![0u64; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let c = f.mul(r[k], lead_inv);
        quot[k - db] = c;
        if c != 0 {
            for i in 0..=db {
                r[k - db + i] = f.sub(r[k - db + i], f.mul(c, b[i]));
            }
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut quot);
    Ok((quot, r))
}

pub fn rem(f: &FieldSpec, a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    Ok(divrem(f, a, b)?.1)
}

pub fn monic(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(a[d]).expect("nonzero leading coefficient");
            scale(f, &a[..=d], inv)
        }
    }
}

pub fn gcd(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn powmod(f: &FieldSpec, base: &[u64], mut e: u128, m: &[u64]) -> Result<Vec<u64>> {
    let mut r = rem(f, &[1], m)?;
    let mut b = rem(f, base, m)?;
    while e > 0 {
        if e & 1 == 1 {
            r = rem(f, &mul(f, &r, &b), m)?;
        }
        b = rem(f, &mul(f, &b, &b), m)?;
        e >>= 1;
    }
    Ok(r)
}

pub fn eval(f: &FieldSpec, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn derivative(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
        .collect();
    trim(&mut out);
    out
}

/// `x^(q^k) mod m` by repeated `q`-th powering, where `q = field order`.
fn frobenius_x(f: &FieldSpec, k: u32, m: &[u64]) -> Result<Vec<u64>> {
    let mut h = rem(f, &[0, 1], m)?;
    for _ in 0..k {
        h = powmod(f, &h, f.order() as u128, m)?;
    }
    Ok(h)
}

/// Distinct-degree factorization of a squarefree monic polynomial: returns
/// `(k, product of all irreducible factors of degree k)` for each `k` present.
pub fn distinct_degree(f: &FieldSpec, a: &[u64]) -> Result<Vec<(u32, Vec<u64>)>> {
    let mut rest = monic(f, a);
    let mut out = Vec::new();
    let mut k = 0u32;
    let x = vec![0u64, 1];
    let mut h = x.clone();
    while degree(&rest).unwrap_or(0) > 0 {
        k += 1;
        if 2 * k as usize > degree(&rest).unwrap_or(0) {
            let d = degree(&rest).unwrap_or(0) as u32;
            out.push((d, rest.clone()));
            break;
        }
        h = powmod(f, &h, f.order() as u128, &rest)?;
        let g = gcd(f, &rest, &sub(f, &h, &x));
        if degree(&g).unwrap_or(0) > 0 {
            out.push((k, g.clone()));
            rest = divrem(f, &rest, &g)?.0;
            h = rem(f, &h, &rest)?;
        }
    }
    Ok(out)
}

/// Squarefree part (product of the distinct irreducible factors).
pub fn squarefree_part(f: &FieldSpec, a: &[u64]) -> Result<Vec<u64>> {
    let a = monic(f, a);
    if degree(&a).unwrap_or(0) == 0 {
        return Ok(a);
    }
    let da = derivative(f, &a);
    if da.is_empty() {
        // a = b(x^p); over a perfect field b(x^p) = c(x)^p
        let p = f.characteristic() as usize;
        let b: Vec<u64> = a.iter().step_by(p).map(|&c| f.frobenius_power(c, f.degree() - 1)).collect();
        return squarefree_part(f, &b);
    }
    let g = gcd(f, &a, &da);
    let core = divrem(f, &a, &g)?.0;
    if degree(&g).unwrap_or(0) == 0 {
        return Ok(core);
    }
    // factors of g not yet in core
    let extra = squarefree_part(f, &g)?;
    let missing = divrem(f, &extra, &gcd(f, &extra, &core))?.0;
    Ok(monic(f, &mul(f, &core, &missing)))
}

/// All roots in `f` of a polynomial known to split into distinct linear factors.
pub fn roots_of_split(f: &FieldSpec, a: &[u64]) -> Result<Vec<u64>> {
    let a = monic(f, a);
    let mut out = Vec::new();
    split_rec(f, &a, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

/// Roots in `f` of an arbitrary nonzero polynomial (without multiplicity).
pub fn roots(f: &FieldSpec, a: &[u64]) -> Result<Vec<u64>> {
    let sq = squarefree_part(f, a)?;
    if degree(&sq).unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let xq = frobenius_x(f, 1, &sq)?;
    let linear = gcd(f, &sq, &sub(f, &xq, &[0, 1]));
    roots_of_split(f, &linear)
}

fn split_rec(f: &FieldSpec, a: &[u64], out: &mut Vec<u64>) -> Result<()> {
    // deltas in code order can stay degenerate for a long time on sparse moduli
    let mut rng = ChaCha8Rng::seed_from_u64(f.order() ^ a.len() as u64);
    split_with(f, a, out, &mut rng)
}

/// Each random `delta` splits with probability at least 1/2.
const SPLIT_TRIES: usize = 256;

fn split_with(f: &FieldSpec, a: &[u64], out: &mut Vec<u64>, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = degree(a).unwrap_or(0);
    if d == 0 {
        return Ok(());
    }
    if d == 1 {
        out.push(f.neg(f.div(a[0], a[1])?));
        return Ok(());
    }
    let q = f.order();
    for _ in 0..SPLIT_TRIES {
        let delta = rng.gen_range(1..q);
        let h = if f.characteristic() == 2 {
            // trace map of delta*x
            let lin = vec![0, delta];
            let mut t = rem(f, &lin, a)?;
            let mut acc = t.clone();
            for _ in 1..f.degree() {
                t = rem(f, &mul(f, &t, &t), a)?;
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let lin = vec![delta, 1];
            sub(f, &powmod(f, &lin, ((q - 1) / 2) as u128, a)?, &[1])
        };
        let g = gcd(f, a, &h);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < d {
            let other = divrem(f, a, &g)?.0;
            split_with(f, &g, out, rng)?;
            split_with(f, &monic(f, &other), out, rng)?;
            return Ok(());
        }
    }
    Err(Error::Consistency("root splitting did not terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn roots_in_prime_field() {
        let f = make_field(5, 1).unwrap();
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let a = vec![f.from_int(-6), f.from_int(11), f.from_int(-6), 1];
        assert_eq!(roots(&f, &a).unwrap(), vec![1, 2, 3]);
        // x^2 - 2 has no roots mod 5
        assert!(roots(&f, &[f.from_int(-2), 0, 1]).unwrap().is_empty());
    }

    #[test]
    fn distinct_degree_counts() {
        let f = make_field(5, 1).unwrap();
        // x (x^2 - 2): one linear, one quadratic factor
        let a = vec![0, f.from_int(-2), 0, 1];
        let ddf = distinct_degree(&f, &a).unwrap();
        let degs: Vec<(u32, usize)> = ddf.iter().map(|(k, g)| (*k, degree(g).unwrap())).collect();
        assert_eq!(degs, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn squarefree_removes_repeats() {
        let f = make_field(3, 1).unwrap();
        // (x-1)^3 (x+1) ; derivative route plus p-th power route
        let lin = vec![f.from_int(-1), 1];
        let cube = mul(&f, &mul(&f, &lin, &lin), &lin);
        let a = mul(&f, &cube, &[1, 1]);
        let sq = squarefree_part(&f, &a).unwrap();
        assert_eq!(degree(&sq), Some(2));
    }

    #[test]
    fn char_two_split() {
        let f = make_field(2, 4).unwrap();
        // x^16 - x splits completely
        let mut a = vec![0u64; 17];
        a[16] = 1;
        a[1] = 1;
        assert_eq!(roots_of_split(&f, &a).unwrap(), (0..16).collect::<Vec<_>>());
    }
}
