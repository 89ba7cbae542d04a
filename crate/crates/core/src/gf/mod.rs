//! Exact arithmetic in `F_{p^n}`.
//!
//! Elements are stored as integer codes: the coefficient vector of the
//! modulus representation read as base-`p` digits, lowest degree first.
//! Code order is the element enumeration order used everywhere a search
//! needs a deterministic "first" element.
//!
//! Fields up to [`TABLE_LIMIT`] elements use log/exp tables; larger ones
//! (only ever needed for arithmetic, never enumeration) multiply polynomials.

mod fp;
pub mod linalg;
pub mod normal;
pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

pub use normal::{find_normal_basis, NormalBasis};

/// Largest field order backed by log/exp tables.
pub const TABLE_LIMIT: u64 = 1 << 16;
/// Largest field order for any arithmetic (codes must fit comfortably in a `u64`).
pub const ARITH_LIMIT: u64 = 1 << 62;
/// Default bound on base fields built through [`make_field`].
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 20;

static SIZE_BOUND: AtomicU64 = AtomicU64::new(DEFAULT_SIZE_BOUND);

pub fn size_bound() -> u64 {
    SIZE_BOUND.load(Ordering::Relaxed)
}

pub fn set_size_bound(bound: u64) {
    SIZE_BOUND.store(bound.max(2), Ordering::Relaxed);
}

enum Backend {
    Prime,
    Table { exp: Vec<u32>, log: Vec<u32> },
    Poly,
}

struct Inner {
    p: u64,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
    backend: Backend,
}

/// A finite field `F_{p^n}` together with its fixed modulus.
///
/// Cheap to clone; two handles compare equal when they describe the same
/// `(p, n)` (the modulus is a deterministic function of both).
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.degree == other.0.degree
    }
}
impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.degree.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.degree)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.degree)
    }
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), FieldSpec>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FieldSpec>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn checked_pow(p: u64, n: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Builds `F_{p^n}` with the lexicographically least monic irreducible modulus,
/// subject to the configured size bound.
pub fn make_field(p: u64, n: u32) -> Result<FieldSpec> {
    make_field_with_bound(p, n, size_bound())
}

pub fn make_field_with_bound(p: u64, n: u32, bound: u64) -> Result<FieldSpec> {
    if !fp::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    match checked_pow(p, n) {
        Some(q) if q <= bound => FieldSpec::build(p, n),
        _ => Err(Error::SizeBound { p, n, bound }),
    }
}

/// Parses a field order such as `9` or `3^2` into a base field.
pub fn field_from_order(text: &str) -> Result<FieldSpec> {
    let text = text.trim();
    let (p, n) = if let Some((a, b)) = text.split_once('^') {
        let p = a.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        let n = b.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        (p, n)
    } else {
        let q = text.parse::<u64>().map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?
    };
    make_field(p, n)
}

/// Decomposes `q = p^n`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

impl FieldSpec {
    /// Internal constructor: no size bound beyond what the code representation supports.
    pub(crate) fn build(p: u64, n: u32) -> Result<FieldSpec> {
        if !fp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = checked_pow(p, n)
            .filter(|&q| q <= ARITH_LIMIT)
            .ok_or(Error::SizeBound { p, n, bound: ARITH_LIMIT })?;
        if let Some(f) = field_cache().lock().unwrap().get(&(p, n)) {
            return Ok(f.clone());
        }
        let modulus = least_irreducible(p, n);
        let mut inner = Inner { p, degree: n, order, modulus, backend: Backend::Poly };
        if n == 1 {
            inner.backend = Backend::Prime;
        } else if order <= TABLE_LIMIT {
            inner.backend = build_tables(&inner);
        }
        let field = FieldSpec(Arc::new(inner));
        field_cache().lock().unwrap().entry((p, n)).or_insert(field.clone());
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Monic modulus, coefficients in ascending degree (length `degree + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.degree == 1
    }

    pub fn has_tables(&self) -> bool {
        matches!(self.0.backend, Backend::Table { .. } | Backend::Prime)
    }

    pub fn element(&self, code: u64) -> FieldElement {
        debug_assert!(code < self.0.order);
        FieldElement { field: self.clone(), code }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> u64 {
        k.rem_euclid(self.0.p as i64) as u64
    }

    pub fn digits(&self, code: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.degree as usize);
        let mut c = code;
        for _ in 0..self.0.degree {
            out.push(c % self.0.p);
            c /= self.0.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<u64> {
        if digits.len() > self.0.degree as usize {
            return Err(Error::FieldMismatch(format!(
                "{} coefficients for a degree-{} field",
                digits.len(),
                self.0.degree
            )));
        }
        let mut code = 0u64;
        for &d in digits.iter().rev() {
            if d >= self.0.p {
                return Err(Error::Parse(format!("coefficient {d} not reduced mod {}", self.0.p)));
            }
            code = code * self.0.p + d;
        }
        Ok(code)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        match &self.0.backend {
            Backend::Prime => {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            }
            Backend::Table { exp, log } => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                // a + b = a * (1 + b/a)
                let m = self.0.order as usize - 1;
                let la = log[a as usize] as usize;
                let lb = log[b as usize] as usize;
                let t = exp[lb + m - la] as u64;
                let d0 = t % p;
                let s = t - d0 + if d0 + 1 == p { 0 } else { d0 + 1 };
                if s == 0 {
                    0
                } else {
                    exp[la + log[s as usize] as usize] as u64
                }
            }
            Backend::Poly => self.digitwise(a, b, |x, y| (x + y) % p),
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let p = self.0.p;
        if p == 2 || a == 0 {
            return a;
        }
        match &self.0.backend {
            Backend::Prime => p - a,
            Backend::Table { .. } => self.mul(a, p - 1),
            Backend::Poly => self.digitwise(a, 0, |x, _| (p - x) % p),
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.0.backend {
            Backend::Prime => ((a as u128 * b as u128) % self.0.p as u128) as u64,
            Backend::Table { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[log[a as usize] as usize + log[b as usize] as usize] as u64
                }
            }
            Backend::Poly => poly_mul(&self.0, a, b),
        }
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        if let Backend::Table { exp, log } = &self.0.backend {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let m = (self.0.order - 1) as u128;
            let l = (log[a as usize] as u128 * (e % m)) % m;
            return exp[l as usize] as u64;
        }
        let mut r = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(match &self.0.backend {
            Backend::Table { exp, log } => exp[(self.0.order - 1) as usize - log[a as usize] as usize] as u64,
            _ => self.pow(a, (self.0.order - 2) as u128),
        })
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b).ok_or(Error::DivisionByZero)?))
    }

    /// `a^(p^k)`.
    pub fn frobenius_power(&self, a: u64, k: u32) -> u64 {
        let k = k % self.0.degree;
        if k == 0 {
            return a;
        }
        self.pow(a, (self.0.p as u128).pow(k))
    }

    pub fn is_square(&self, a: u64) -> bool {
        if a == 0 || self.0.p == 2 {
            return true;
        }
        self.pow(a, ((self.0.order - 1) / 2) as u128) == 1
    }

    /// Absolute trace to `F_p`.
    pub fn absolute_trace(&self, a: u64) -> u64 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.0.degree {
            acc = self.add(acc, x);
            x = self.pow(x, self.0.p as u128);
        }
        acc
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.0.order)
    }

    /// Codes of the subfield `F_{p^k}` (`k | degree`), ascending.
    pub fn subfield_elements(&self, k: u32) -> Result<Vec<u64>> {
        let basis = self.subfield_basis(k)?;
        let p = self.0.p;
        let size = checked_pow(p, k).ok_or(Error::SizeBound { p, n: k, bound: ARITH_LIMIT })?;
        let mut out = Vec::with_capacity(size as usize);
        for idx in 0..size {
            let mut acc = 0u64;
            let mut c = idx;
            for &b in &basis {
                let d = c % p;
                c /= p;
                if d != 0 {
                    acc = self.add(acc, self.mul(d, b));
                }
            }
            out.push(acc);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// An `F_p`-basis of the subfield `F_{p^k}`, as codes.
    pub fn subfield_basis(&self, k: u32) -> Result<Vec<u64>> {
        let n = self.0.degree;
        if k == 0 || n % k != 0 {
            return Err(Error::FieldMismatch(format!("F_{}^{k} is not a subfield of {self:?}", self.0.p)));
        }
        if k == n {
            return Ok((0..n).map(|i| (self.0.p).pow(i)).collect());
        }
        let p = self.0.p;
        let nn = n as usize;
        // columns: coordinates of (x^i)^(p^k) - x^i
        let mut mat = vec![vec![0u64; nn]; nn];
        for i in 0..nn {
            let xi = p.pow(i as u32);
            let img = self.sub(self.frobenius_power(xi, k), xi);
            for (r, d) in self.digits(img).into_iter().enumerate() {
                mat[r][i] = d;
            }
        }
        let ker = fp::kernel(&mat, nn, p);
        Ok(ker.into_iter().map(|v| self.from_digits(&v).expect("reduced digits")).collect())
    }

    /// Smallest `k | degree` with `a^(p^k) = a`, i.e. the degree of `F_p(a)`.
    pub fn element_degree(&self, a: u64) -> u32 {
        (1..=self.0.degree)
            .filter(|k| self.0.degree % k == 0)
            .find(|&k| self.frobenius_power(a, k) == a)
            .unwrap_or(self.0.degree)
    }

    /// `F_{q^d}` where `q = self.order()`, with the embedding of `self` into it.
    pub fn extension(&self, d: u32) -> Result<Extension> {
        if d == 0 {
            return Err(Error::ZeroDegree);
        }
        let big = FieldSpec::build(self.0.p, self.0.degree * d)?;
        let embedding = Embedding::new(self, &big)?;
        Ok(Extension { base: self.clone(), field: big, degree: d, embedding })
    }

    fn digitwise(&self, a: u64, b: u64, op: impl Fn(u64, u64) -> u64) -> u64 {
        let p = self.0.p;
        let (mut x, mut y) = (a, b);
        let mut out = 0u64;
        let mut scale = 1u64;
        for i in 0..self.0.degree {
            let d = op(x % p, y % p);
            out += d * scale;
            x /= p;
            y /= p;
            if i + 1 < self.0.degree {
                scale *= p;
            }
        }
        out
    }
}

fn least_irreducible(p: u64, n: u32) -> Vec<u64> {
    if n == 1 {
        return vec![0, 1];
    }
    let count = p.pow(n);
    for v in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut c = v;
        for _ in 0..n {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if fp::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_mul(inner: &Inner, a: u64, b: u64) -> u64 {
    let n = inner.degree as usize;
    let p = inner.p;
    if p == 2 {
        let mut prod: u128 = 0;
        let mut x = a as u128;
        let mut y = b;
        while y != 0 {
            if y & 1 == 1 {
                prod ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        let m: u128 = inner.modulus.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i));
        for k in (n..(2 * n).max(n + 1)).rev() {
            if (prod >> k) & 1 == 1 {
                prod ^= m << (k - n);
            }
        }
        return prod as u64;
    }
    let mut da = [0u64; 64];
    let mut db = [0u64; 64];
    let (mut x, mut y) = (a, b);
    for i in 0..n {
        da[i] = x % p;
        db[i] = y % p;
        x /= p;
        y /= p;
    }
    let mut prod = [0u64; 128];
    for i in 0..n {
        if da[i] == 0 {
            continue;
        }
        for j in 0..n {
            prod[i + j] = ((prod[i + j] as u128 + da[i] as u128 * db[j] as u128) % p as u128) as u64;
        }
    }
    for k in (n..2 * n - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for i in 0..n {
            let s = ((c as u128 * inner.modulus[i] as u128) % p as u128) as u64;
            prod[k - n + i] = (prod[k - n + i] + p - s) % p;
        }
        prod[k] = 0;
    }
    let mut out = 0u64;
    for i in (0..n).rev() {
        out = out * p + prod[i];
    }
    out
}

fn build_tables(inner: &Inner) -> Backend {
    let q = inner.order;
    let m = q - 1;
    let factors = fp::factor_distinct(m);
    let order_is_full = |g: u64| {
        factors.iter().all(|&r| {
            let mut acc = 1u64;
            let mut b = g;
            let mut e = m / r;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mul(inner, acc, b);
                }
                b = poly_mul(inner, b, b);
                e >>= 1;
            }
            acc != 1
        })
    };
    let g = (2..q).find(|&g| order_is_full(g)).expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * m as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for i in 0..m as usize {
        exp[i] = x as u32;
        exp[i + m as usize] = x as u32;
        log[x as usize] = i as u32;
        x = poly_mul(inner, x, g);
    }
    Backend::Table { exp, log }
}

/// Ring map `F_{p^n} -> F_{p^N}` determined by the image of the generator `x`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldSpec,
    target: FieldSpec,
    powers: Arc<Vec<u64>>,
}

fn embedding_cache() -> &'static Mutex<HashMap<(u64, u32, u32), Arc<Vec<u64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u32), Arc<Vec<u64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Embedding {
    /// The generator image is the least-code root of the source modulus in the target.
    pub fn new(source: &FieldSpec, target: &FieldSpec) -> Result<Embedding> {
        let (p, n, big_n) = (source.characteristic(), source.degree(), target.degree());
        if target.characteristic() != p || big_n % n != 0 {
            return Err(Error::FieldMismatch(format!("{source:?} does not embed in {target:?}")));
        }
        let key = (p, n, big_n);
        if let Some(powers) = embedding_cache().lock().unwrap().get(&key) {
            return Ok(Embedding { source: source.clone(), target: target.clone(), powers: powers.clone() });
        }
        let powers = if n == 1 {
            vec![1]
        } else {
            let modulus: Vec<u64> = source.modulus().to_vec();
            let roots = poly::roots_of_split(target, &modulus)?;
            let gamma = *roots
                .iter()
                .min()
                .ok_or_else(|| Error::Consistency("modulus has no root in the extension".into()))?;
            let mut pw = Vec::with_capacity(n as usize);
            let mut acc = 1u64;
            for _ in 0..n {
                pw.push(acc);
                acc = target.mul(acc, gamma);
            }
            pw
        };
        let powers = Arc::new(powers);
        embedding_cache().lock().unwrap().insert(key, powers.clone());
        Ok(Embedding { source: source.clone(), target: target.clone(), powers })
    }

    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    /// Image of the source generator.
    pub fn generator_image(&self) -> u64 {
        self.powers.get(1).copied().unwrap_or(0)
    }

    /// Inverse image of `code`, if it lies in the image.
    pub fn preimage(&self, code: u64) -> Option<u64> {
        let p = self.source.characteristic();
        let m = self.powers.len();
        let rows = self.target.degree() as usize;
        let mut mat = vec![vec![0u64; m + 1]; rows];
        for (c, &pw) in self.powers.iter().chain(std::iter::once(&code)).enumerate() {
            for (r, d) in self.target.digits(pw).into_iter().enumerate() {
                mat[r][c] = d;
            }
        }
        let ker = fp::kernel(&mat, m + 1, p);
        let v = ker.into_iter().find(|v| v[m] != 0)?;
        // v[..m] . powers + v[m] * code = 0  =>  code = -(v[..m] / v[m]) . powers
        let scale = (p - fp::inv_mod(v[m], p)) % p;
        let digits: Vec<u64> = v[..m].iter().map(|&x| x * scale % p).collect();
        self.source.from_digits(&digits).ok()
    }

    pub fn apply(&self, code: u64) -> u64 {
        let p = self.source.characteristic();
        let mut c = code;
        let mut acc = 0u64;
        for &pw in self.powers.iter() {
            let d = c % p;
            c /= p;
            if d != 0 {
                acc = self.target.add(acc, self.target.mul(d, pw));
            }
        }
        acc
    }
}

fn tower_cache() -> &'static Mutex<HashMap<(u64, u32, u32, u32), Arc<Vec<u64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u32, u32), Arc<Vec<u64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Embedding `F_{q^d} -> F_{q^l}` (`d | l`) that agrees with the standard
/// embeddings of `F_q` on both sides, so configurations keep their meaning
/// when lifted into a common extension.
pub fn tower_embedding(base: &FieldSpec, d: u32, l: u32) -> Result<Embedding> {
    if d == 0 || l == 0 {
        return Err(Error::ZeroDegree);
    }
    if l % d != 0 {
        return Err(Error::FieldMismatch(format!("degree {d} does not divide {l}")));
    }
    let n = base.degree();
    let target = FieldSpec::build(base.characteristic(), n * l)?;
    if d == 1 {
        return Embedding::new(base, &target);
    }
    let source = FieldSpec::build(base.characteristic(), n * d)?;
    if d == l {
        let powers = (0..source.degree()).map(|i| source.characteristic().pow(i)).collect();
        return Ok(Embedding { source, target, powers: Arc::new(powers) });
    }
    let key = (base.characteristic(), n, d, l);
    if let Some(powers) = tower_cache().lock().unwrap().get(&key) {
        return Ok(Embedding { source, target, powers: powers.clone() });
    }
    let into_source = Embedding::new(base, &source)?;
    let into_target = Embedding::new(base, &target)?;
    let g = if n == 1 { 1 } else { base.characteristic() };
    let a_digits = source.digits(into_source.apply(g));
    let b = into_target.apply(g);
    let roots = poly::roots_of_split(&target, source.modulus())?;
    let gamma = roots
        .into_iter()
        .find(|&r| poly::eval(&target, &a_digits, r) == b)
        .ok_or_else(|| Error::Consistency("no compatible tower embedding".into()))?;
    let mut powers = Vec::with_capacity(source.degree() as usize);
    let mut acc = 1u64;
    for _ in 0..source.degree() {
        powers.push(acc);
        acc = target.mul(acc, gamma);
    }
    let powers = Arc::new(powers);
    tower_cache().lock().unwrap().insert(key, powers.clone());
    Ok(Embedding { source, target, powers })
}

/// `F_{q^d}` built over a base `F_q`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub base: FieldSpec,
    pub field: FieldSpec,
    pub degree: u32,
    pub embedding: Embedding,
}

/// An element tagged with its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldSpec,
    code: u64,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.digits(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.field.element(self.field.add(self.code, other.code)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.field.element(self.field.mul(self.code, other.code)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.code).ok_or(Error::DivisionByZero)?))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.field.element(self.field.pow(self.code, e))
    }

    /// Parses `p^n:c0,c1,...`.
    pub fn parse(text: &str) -> Result<FieldElement> {
        let (head, body) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in field element '{text}'")))?;
        let (p, n) = head
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("missing '^' in field element '{text}'")))?;
        let p: u64 = p.trim().parse().map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        let n: u32 = n.trim().parse().map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        let field = FieldSpec::build(p, n)?;
        let digits: Vec<u64> = body
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{text}: {e}"))))
            .collect::<Result<_>>()?;
        let code = field.from_digits(&digits)?;
        Ok(field.element(code))
    }

    /// Parses an element of a known field: either the full `p^n:...` form or a bare
    /// comma-separated coefficient list.
    pub fn parse_in(field: &FieldSpec, text: &str) -> Result<FieldElement> {
        if text.contains(':') {
            let e = FieldElement::parse(text)?;
            if e.field != *field {
                return Err(Error::FieldMismatch(format!("{text} is not in {field:?}")));
            }
            return Ok(e);
        }
        let digits: Vec<u64> = text
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{text}: {e}"))))
            .collect::<Result<_>>()?;
        Ok(field.element(field.from_digits(&digits)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.field)?;
        let digits = self.field.digits(self.code);
        for (i, d) in digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `x^q` where `q` is the order of `base`; `x` must lie in an extension of `base`.
pub fn frobenius(x: &FieldElement, base: &FieldSpec) -> Result<FieldElement> {
    let f = x.field();
    if f.characteristic() != base.characteristic() || f.degree() % base.degree() != 0 {
        return Err(Error::FieldMismatch(format!("{f:?} is not an extension of {base:?}")));
    }
    Ok(f.element(f.frobenius_power(x.code(), base.degree())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_moduli() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(make_field(2, 21), Err(Error::SizeBound { .. })));
        assert!(make_field_with_bound(2, 21, 1 << 21).is_ok());
    }

    #[test]
    fn frobenius_on_f4() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        // modulus x^2 + x + 1, u = x has code 2, u + 1 has code 3
        let u = f4.element(2);
        assert_eq!(frobenius(&u, &f2).unwrap().code(), 3);
        assert_eq!(frobenius(&frobenius(&u, &f2).unwrap(), &f2).unwrap(), u);
    }

    #[test]
    fn frobenius_rejects_non_extension() {
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        assert!(frobenius(&f8.element(3), &f4).is_err());
        let f3 = make_field(3, 1).unwrap();
        assert!(frobenius(&f4.element(1), &f3).is_err());
    }

    #[test]
    fn table_and_poly_backends_agree() {
        // F_{2^8} has tables; compare against direct polynomial multiplication.
        let f = make_field(2, 8).unwrap();
        let q = f.order();
        for a in (0..q).step_by(7) {
            for b in (0..q).step_by(11) {
                assert_eq!(f.mul(a, b), poly_mul(&f.0, a, b));
            }
        }
        let g = make_field(3, 5).unwrap();
        for a in (0..g.order()).step_by(13) {
            for b in (0..g.order()).step_by(17) {
                assert_eq!(g.mul(a, b), poly_mul(&g.0, a, b));
                assert_eq!(g.add(a, b), g.digitwise(a, b, |x, y| (x + y) % 3));
            }
        }
    }

    #[test]
    fn element_round_trip_text() {
        let f = make_field(3, 2).unwrap();
        let e = f.element(7);
        let s = e.to_string();
        assert_eq!(s, "3^2:1,2");
        assert_eq!(FieldElement::parse(&s).unwrap(), e);
        assert!(FieldElement::parse("3^2:1,3").is_err());
        assert!(FieldElement::parse("3^2").is_err());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f4 = make_field(2, 2).unwrap();
        let ext = f4.extension(3).unwrap();
        assert_eq!(ext.field.order(), 64);
        let e = &ext.embedding;
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(e.apply(f4.mul(a, b)), ext.field.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(f4.add(a, b)), ext.field.add(e.apply(a), e.apply(b)));
            }
        }
        let f9 = make_field(3, 2).unwrap();
        let ext = f9.extension(6).unwrap();
        assert!(!ext.field.has_tables());
        let e = &ext.embedding;
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(e.apply(f9.mul(a, b)), ext.field.mul(e.apply(a), e.apply(b)));
            }
        }
    }

    #[test]
    fn tower_embedding_fixes_base() {
        let f4 = make_field(2, 2).unwrap();
        let e2 = tower_embedding(&f4, 2, 6).unwrap();
        let e3 = tower_embedding(&f4, 3, 6).unwrap();
        let e1 = tower_embedding(&f4, 1, 6).unwrap();
        let s2 = f4.extension(2).unwrap().embedding;
        let s3 = f4.extension(3).unwrap().embedding;
        for a in 0..4 {
            assert_eq!(e2.apply(s2.apply(a)), e1.apply(a));
            assert_eq!(e3.apply(s3.apply(a)), e1.apply(a));
        }
        let big = e2.target().clone();
        for a in 0..16 {
            for b in 0..16 {
                let src = e2.source();
                assert_eq!(e2.apply(src.mul(a, b)), big.mul(e2.apply(a), e2.apply(b)));
            }
            assert_eq!(e2.preimage(e2.apply(a)), Some(a));
        }
        // an element outside the image has no preimage
        let outside = (0..big.order()).find(|&x| big.element_degree(x) == 12).unwrap();
        assert_eq!(e2.preimage(outside), None);
    }

    #[test]
    fn subfields() {
        let f = make_field(2, 6).unwrap();
        let s = f.subfield_elements(2).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|&x| f.frobenius_power(x, 2) == x));
        let s3 = f.subfield_elements(3).unwrap();
        assert_eq!(s3.len(), 8);
        assert!(f.subfield_elements(4).is_err());
    }

    #[test]
    fn prime_power_parse() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(field_from_order("16").unwrap().order(), 16);
        assert_eq!(field_from_order("5^1").unwrap().order(), 5);
    }
}
