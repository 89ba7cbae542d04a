//! Homogeneous forms over a finite field, stored sparsely by exponent tuple.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// Exponent tuple of a monomial in the weight-1 variables.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub nvars: usize,
    pub degree: u32,
    /// Nonzero coefficients only.
    pub terms: BTreeMap<Exponents, u64>,
}

/// All exponent tuples of total degree `degree` in `nvars` variables, in
/// descending lexicographic order (`x^d` first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exponents> {
    fn go(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        go(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    }
    out
}

impl Form {
    pub fn zero(nvars: usize, degree: u32) -> Form {
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, degree: u32, terms: impl IntoIterator<Item = (Exponents, u64)>) -> Result<Form> {
        let mut f = Form::zero(nvars, degree);
        for (e, c) in terms {
            f.set(e, c)?;
        }
        Ok(f)
    }

    /// Sets the coefficient of a monomial, checking its degree.
    pub fn set(&mut self, e: Exponents, c: u64) -> Result<()> {
        if e.len() != self.nvars {
            return Err(Error::InvalidSurface(format!("monomial {} needs {} exponents", fmt_exponents(&e), self.nvars)));
        }
        if e.iter().sum::<u32>() != self.degree {
            return Err(Error::InvalidSurface(format!("monomial {} is not of degree {}", fmt_exponents(&e), self.degree)));
        }
        if c == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, f: &FieldSpec, v: &[u64]) -> u64 {
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in v.iter().zip(e) {
                if k > 0 {
                    t = f.mul(t, f.pow(x, k as u128));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn add(&self, f: &FieldSpec, other: &Form) -> Form {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            let v = f.add(out.terms.get(e).copied().unwrap_or(0), c);
            if v == 0 {
                out.terms.remove(e);
            } else {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn scale(&self, f: &FieldSpec, k: u64) -> Form {
        let terms = self.terms.iter().map(|(e, &c)| (e.clone(), f.mul(c, k))).filter(|(_, c)| *c != 0).collect();
        Form { nvars: self.nvars, degree: self.degree, terms }
    }

    pub fn mul(&self, f: &FieldSpec, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Form::zero(self.nvars, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let v = f.add(out.terms.get(&e).copied().unwrap_or(0), f.mul(ca, cb));
                if v == 0 {
                    out.terms.remove(&e);
                } else {
                    out.terms.insert(e, v);
                }
            }
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(f: &FieldSpec, nvars: usize, degree: u32, rng: &mut R) -> Form {
        let terms = monomials(nvars, degree).into_iter().map(|e| (e, f.random(rng))).filter(|(_, c)| *c != 0).collect();
        Form { nvars, degree, terms }
    }
}

pub fn fmt_exponents(e: &[u32]) -> String {
    format!("({})", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// Parses `"(4,0)"`.
pub fn parse_exponents(text: &str) -> Result<Exponents> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("exponent tuple '{text}' must look like (a,b,...)")))?;
    inner
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|e| Error::Parse(format!("exponent tuple '{text}': {e}"))))
        .collect()
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: &[&str] = if self.nvars == 2 { &["x", "y"] } else { &["x", "y", "z"] };
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            match (*c, mono.is_empty()) {
                (c, true) => write!(f, "[{c}]")?,
                (1, false) => write!(f, "{}", mono.join("*"))?,
                (c, false) => write!(f, "[{c}]*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 6).len(), 7);
        assert_eq!(monomials(3, 4).len(), 15);
        assert_eq!(monomials(3, 2)[0], vec![2, 0, 0]);
    }

    #[test]
    fn square_of_binomial_in_char_3() {
        let f = make_field(3, 1).unwrap();
        let a = Form::from_terms(2, 1, [(vec![1, 0], 1), (vec![0, 1], 1)]).unwrap();
        let sq = a.mul(&f, &a);
        assert_eq!(sq.terms.get(&vec![1, 1]), Some(&2));
        assert_eq!(sq.eval(&f, &[1, 1]), 1);
        assert!(a.add(&f, &a.scale(&f, 2)).is_zero());
    }

    #[test]
    fn exponent_round_trip() {
        assert_eq!(parse_exponents(" (4, 0)").unwrap(), vec![4, 0]);
        assert_eq!(fmt_exponents(&[2, 1, 1]), "(2,1,1)");
        assert!(parse_exponents("4,0").is_err());
    }
}
