//! Prime-field and extension-field arithmetic.
//!
//! Everything in this crate works over `F_q` (q prime) or a desk-scale
//! extension `F_{q^m}`. Extension elements are coefficient vectors with the
//! constant term first, reduced modulo a monic irreducible polynomial. The
//! selection of modulus and generator is deterministic so that golden tests
//! stay stable across runs.

use std::fmt;

use thiserror::Error;

/// An element of the prime field `F_q`, always reduced into `[0, q)`.
pub type Fq = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is reducible over F_{1}")]
    Reducible(Poly, u32),
    #[error("modulus must be monic of degree {expected}, got {got}")]
    BadModulus { expected: usize, got: String },
    #[error("no monic irreducible polynomial of degree {0} found")]
    NoSuchDegree(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd({q}, {l}) != 1")]
    NotCoprime { q: u64, l: u64 },
    #[error("no element of multiplicative order {l} in a field of {size} elements")]
    OrderUnattainable { l: u64, size: u128 },
    #[error("F_{q}^{m} exceeds the desk-scale guard (m <= 32 and q^m <= 2^64)")]
    TooLarge { q: u64, m: usize },
    #[error("cannot parse `{0}` as a coefficient list")]
    Parse(String),
}

/// Trial-division primality check. Desk scale only.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest `m >= 1` with `q^m = 1 (mod l)`.
pub fn multiplicative_order(q: u64, l: u64) -> Result<u64, FieldError> {
    if l < 2 || gcd(q, l) != 1 {
        return Err(FieldError::NotCoprime { q, l });
    }
    let mut pow = q % l;
    let mut m = 1u64;
    while pow != 1 {
        pow = pow * (q % l) % l;
        m += 1;
    }
    Ok(m)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_q
// ---------------------------------------------------------------------------

/// A univariate polynomial over `F_q`, constant term first, no trailing
/// zeros. The zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    /// Builds from raw coefficients (constant term first), trimming trailing
    /// zeros. Coefficients must already be reduced mod q.
    pub fn from_coeffs(coeffs: &[Fq]) -> Self {
        let mut c = coeffs.to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { coeffs: c }
    }

    /// `c * x^deg`.
    pub fn monomial(deg: usize, c: Fq) -> Self {
        if c == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    /// `x^l - 1` over `F_q`.
    pub fn x_pow_minus_one(l: usize, q: Fq) -> Self {
        let mut coeffs = vec![0; l + 1];
        coeffs[0] = q - 1;
        coeffs[l] = 1;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Coefficients read as a base-q integer (constant term least
    /// significant). Used as the deterministic ordering on polynomials.
    pub fn integer_value(&self, q: Fq) -> u128 {
        let mut v = 0u128;
        for &c in self.coeffs.iter().rev() {
            v = v * q as u128 + c as u128;
        }
        v
    }

    pub fn add(&self, rhs: &Poly, q: Fq) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.coeff(i) + rhs.coeff(i)) % q;
        }
        Poly::from_coeffs(&out)
    }

    pub fn sub(&self, rhs: &Poly, q: Fq) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.coeff(i) + q - rhs.coeff(i)) % q;
        }
        Poly::from_coeffs(&out)
    }

    pub fn mul(&self, rhs: &Poly, q: Fq) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % q as u64;
            }
        }
        let out: Vec<Fq> = out.into_iter().map(|c| c as Fq).collect();
        Poly::from_coeffs(&out)
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn divrem(&self, divisor: &Poly, q: Fq) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.degree().unwrap();
        let lead_inv = mod_inverse(divisor.leading(), q);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = rem[rem.len() - 1] as u64 * lead_inv as u64 % q as u64;
            if factor != 0 {
                quot[k] = factor as Fq;
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    let sub = factor * dc as u64 % q as u64;
                    rem[k + i] = ((rem[k + i] as u64 + q as u64 - sub) % q as u64) as Fq;
                }
            }
            rem.pop();
        }
        (Poly::from_coeffs(&quot), Poly::from_coeffs(&rem))
    }

    pub fn rem(&self, divisor: &Poly, q: Fq) -> Poly {
        self.divrem(divisor, q).1
    }

    pub fn gcd(&self, rhs: &Poly, q: Fq) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b, q);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        // normalize monic
        let inv = mod_inverse(a.leading(), q);
        let coeffs: Vec<Fq> = a
            .coeffs
            .iter()
            .map(|&c| (c as u64 * inv as u64 % q as u64) as Fq)
            .collect();
        Poly::from_coeffs(&coeffs)
    }

    /// `self^e mod m` over `F_q`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly, q: Fq) -> Poly {
        let mut base = self.rem(m, q);
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, q).rem(m, q);
            }
            base = base.mul(&base, q).rem(m, q);
            e >>= 1;
        }
        acc
    }

    /// Parses a comma-separated coefficient list, constant term first.
    pub fn parse(s: &str, q: Fq) -> Result<Poly, FieldError> {
        let mut coeffs = Vec::new();
        for part in s.trim().split(',') {
            let v: u64 = part
                .trim()
                .parse()
                .map_err(|_| FieldError::Parse(s.to_string()))?;
            coeffs.push((v % q as u64) as Fq);
        }
        Ok(Poly::from_coeffs(&coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn mod_inverse(a: Fq, q: Fq) -> Fq {
    assert!(a != 0, "inverse of zero in F_q");
    // Fermat: a^(q-2) mod q
    let mut e = q - 2;
    let mut base = a as u64;
    let mut acc = 1u64;
    let qq = q as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % qq;
        }
        base = base * base % qq;
        e >>= 1;
    }
    acc as Fq
}

/// Inverse in `F_q` as a standalone helper for matrix code.
pub fn fq_inverse(a: Fq, q: Fq) -> Fq {
    mod_inverse(a, q)
}

/// Irreducibility over `F_q`. Degree-d factors of `f` divide
/// `x^(q^d) - x`, so it suffices to test gcds for d up to deg(f)/2.
pub fn is_irreducible(f: &Poly, q: Fq) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    if f.coeff(0) == 0 {
        return false; // divisible by x
    }
    // work with the monic normalization
    let inv = mod_inverse(f.leading(), q);
    let coeffs: Vec<Fq> = f
        .coeffs()
        .iter()
        .map(|&c| (c as u64 * inv as u64 % q as u64) as Fq)
        .collect();
    let f = Poly::from_coeffs(&coeffs);
    let mut xq = Poly::x(); // will hold x^(q^d) mod f
    for _ in 0..n / 2 {
        xq = xq.pow_mod(q as u64, &f, q);
        let diff = xq.sub(&Poly::x(), q);
        let g = f.gcd(&diff, q);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// The smallest (in base-q integer order) monic irreducible polynomial of
/// degree `m` over `F_q`.
pub fn smallest_irreducible(q: Fq, m: usize) -> Result<Poly, FieldError> {
    let count = (q as u128).checked_pow(m as u32).ok_or(FieldError::TooLarge {
        q: q as u64,
        m,
    })?;
    for idx in 0..count {
        let mut coeffs = vec![0; m + 1];
        let mut v = idx;
        for c in coeffs.iter_mut().take(m) {
            *c = (v % q as u128) as Fq;
            v /= q as u128;
        }
        coeffs[m] = 1;
        let f = Poly::from_coeffs(&coeffs);
        if is_irreducible(&f, q) {
            return Ok(f);
        }
    }
    Err(FieldError::NoSuchDegree(m))
}

/// The L-th cyclotomic polynomial reduced mod q, via the Moebius product.
pub fn cyclotomic_polynomial(q: Fq, l: u64) -> Result<Poly, FieldError> {
    if l < 1 || gcd(q as u64, l) != 1 {
        return Err(FieldError::NotCoprime { q: q as u64, l });
    }
    let mut num = Poly::one();
    let mut den = Poly::one();
    for d in 1..=l {
        if l % d != 0 {
            continue;
        }
        match moebius(l / d) {
            1 => num = num.mul(&Poly::x_pow_minus_one(d as usize, q), q),
            -1 => den = den.mul(&Poly::x_pow_minus_one(d as usize, q), q),
            _ => {}
        }
    }
    let (quot, rem) = num.divrem(&den, q);
    debug_assert!(rem.is_zero());
    Ok(quot)
}

fn moebius(mut n: u64) -> i32 {
    let mut k = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `tau(x) = (x^L - 1) / Phi_L(x)` over `F_q`: the product of `(x - b^j)`
/// over the exponents j in `[0, L)` that are not coprime to L. Has degree
/// `L - J` and base-field coefficients; equals `1 + x` when q = 2 and L is
/// prime.
pub fn tau_polynomial(q: Fq, l: u64) -> Result<Poly, FieldError> {
    let phi = cyclotomic_polynomial(q, l)?;
    let (quot, rem) = Poly::x_pow_minus_one(l as usize, q).divrem(&phi, q);
    debug_assert!(rem.is_zero());
    Ok(quot)
}

// ---------------------------------------------------------------------------
// Extension fields
// ---------------------------------------------------------------------------

/// An element of `F_{q^m}`: `m` coefficients over `F_q`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<Fq>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Serializes as a comma-separated coefficient list.
    pub fn to_csv(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

/// The arithmetic context for `F_{q^m}`: prime q, degree m, a monic
/// irreducible modulus and a fixed primitive element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    q: Fq,
    m: usize,
    modulus: Poly,
    generator: FieldElement,
    /// distinct prime factors of q^m - 1, for order computations
    order_factors: Vec<u128>,
}

impl FieldSpec {
    /// Builds `F_{q^m}`. When `modulus` is absent the smallest monic
    /// irreducible of degree m (base-q integer order) is selected; the
    /// generator is the first element, in the same order, of full
    /// multiplicative order.
    pub fn new(q: u64, m: usize, modulus: Option<Poly>) -> Result<FieldSpec, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        if m == 0 || m > 32 {
            return Err(FieldError::TooLarge { q, m });
        }
        let size = (q as u128).checked_pow(m as u32);
        match size {
            Some(s) if s <= u64::MAX as u128 + 1 => {}
            _ => return Err(FieldError::TooLarge { q, m }),
        }
        let q = q as Fq;
        let modulus = match modulus {
            Some(p) => {
                if p.degree() != Some(m) || !p.is_monic() {
                    return Err(FieldError::BadModulus {
                        expected: m,
                        got: p.to_string(),
                    });
                }
                if !is_irreducible(&p, q) {
                    return Err(FieldError::Reducible(p, q));
                }
                p
            }
            None => smallest_irreducible(q, m)?,
        };
        let order = (q as u128).pow(m as u32) - 1;
        let order_factors = prime_factors(order);
        let mut fs = FieldSpec {
            q,
            m,
            modulus,
            generator: FieldElement { coeffs: vec![0; m] },
            order_factors,
        };
        fs.generator = fs.find_generator()?;
        Ok(fs)
    }

    fn find_generator(&self) -> Result<FieldElement, FieldError> {
        let size = self.size();
        for idx in 1..size {
            let x = self.element_from_index(idx as u64);
            if self.has_full_order(&x) {
                return Ok(x);
            }
        }
        Err(FieldError::NoSuchDegree(self.m))
    }

    fn has_full_order(&self, x: &FieldElement) -> bool {
        let full = self.size() - 1;
        self.order_factors
            .iter()
            .all(|&p| !self.is_one(&self.pow(x, full / p)))
    }

    pub fn q(&self) -> Fq {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The fixed primitive element.
    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    /// `q^m` as u128.
    pub fn size(&self) -> u128 {
        (self.q as u128).pow(self.m as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    /// Embeds a base-field scalar.
    pub fn from_base(&self, c: Fq) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = c % self.q;
        FieldElement { coeffs }
    }

    /// Extracts the base-field value if the element lies in `F_q`.
    pub fn as_base(&self, x: &FieldElement) -> Option<Fq> {
        if x.coeffs[1..].iter().all(|&c| c == 0) {
            Some(x.coeffs[0])
        } else {
            None
        }
    }

    pub fn from_coeffs(&self, coeffs: &[Fq]) -> FieldElement {
        assert_eq!(coeffs.len(), self.m, "coefficient vector of wrong length");
        FieldElement {
            coeffs: coeffs.iter().map(|&c| c % self.q).collect(),
        }
    }

    /// Element whose coefficient vector reads `idx` in base q, constant term
    /// least significant.
    pub fn element_from_index(&self, idx: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        let mut v = idx;
        for c in coeffs.iter_mut() {
            *c = (v % self.q as u64) as Fq;
            v /= self.q as u64;
        }
        debug_assert_eq!(v, 0, "index out of range for this field");
        FieldElement { coeffs }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        let mut v = 0u64;
        for &c in x.coeffs.iter().rev() {
            v = v * self.q as u64 + c as u64;
        }
        v
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size() as u64).map(move |i| self.element_from_index(i))
    }

    pub fn is_one(&self, x: &FieldElement) -> bool {
        x.coeffs[0] == 1 && x.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.q)
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.q - y) % self.q)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    pub fn scalar_mul(&self, c: Fq, a: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| (x as u64 * c as u64 % self.q as u64) as Fq)
            .collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let pa = Poly::from_coeffs(&a.coeffs);
        let pb = Poly::from_coeffs(&b.coeffs);
        let prod = pa.mul(&pb, self.q).rem(&self.modulus, self.q);
        self.reduce_poly(prod)
    }

    fn reduce_poly(&self, p: Poly) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = p.coeff(i);
        }
        FieldElement { coeffs }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // extended Euclid in F_q[x]
        let mut r0 = self.modulus.clone();
        let mut r1 = Poly::from_coeffs(&a.coeffs);
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (quot, rem) = r0.divrem(&r1, self.q);
            let t2 = t0.sub(&quot.mul(&t1, self.q), self.q);
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r0 is a nonzero constant gcd
        let c_inv = mod_inverse(r0.coeff(0), self.q);
        let inv = t0.mul(&Poly::from_coeffs(&[c_inv]), self.q).rem(&self.modulus, self.q);
        Ok(self.reduce_poly(inv))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x^(q^s)`. Additive and multiplicative over the field.
    pub fn frobenius(&self, x: &FieldElement, s: usize) -> FieldElement {
        let s = s % self.m;
        let mut y = x.clone();
        for _ in 0..s {
            y = self.pow(&y, self.q as u128);
        }
        y
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: &FieldElement) -> Result<u128, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut o = self.size() - 1;
        for &p in &self.order_factors {
            while o % p == 0 && self.is_one(&self.pow(x, o / p)) {
                o /= p;
            }
        }
        Ok(o)
    }

    /// The canonical primitive L-th root of unity: `generator^((q^m-1)/L)`.
    pub fn primitive_root_of_unity(&self, l: u64) -> Result<FieldElement, FieldError> {
        if l == 0 {
            return Err(FieldError::OrderUnattainable { l, size: self.size() });
        }
        let full = self.size() - 1;
        if full % l as u128 != 0 {
            return Err(FieldError::OrderUnattainable { l, size: self.size() });
        }
        let beta = self.pow(&self.generator, full / l as u128);
        debug_assert_eq!(self.order(&beta).unwrap(), l as u128);
        Ok(beta)
    }

    /// Trace down to `F_q`: the sum of all conjugates `x^(q^s)`.
    pub fn trace(&self, x: &FieldElement) -> Fq {
        let mut acc = self.zero();
        let mut y = x.clone();
        for _ in 0..self.m {
            acc = self.add(&acc, &y);
            y = self.frobenius(&y, 1);
        }
        self.as_base(&acc).expect("trace lands in the base field")
    }

    /// Discrete log base the generator, by iteration. Returns `None` for 0.
    pub fn log(&self, x: &FieldElement) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut acc = self.one();
        for e in 0..self.size() as u64 {
            if &acc == x {
                return Some(e);
            }
            acc = self.mul(&acc, &self.generator);
        }
        unreachable!("generator does not span the multiplicative group");
    }

    /// Formats an element as a power of the generator, for display.
    pub fn fmt_power(&self, x: &FieldElement) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(0) => "1".to_string(),
            Some(1) => "a".to_string(),
            Some(e) => format!("a^{e}"),
        }
    }
}

/// Convenience constructor matching the shape everything downstream uses.
pub fn make_ext_field(q: u64, m: usize, modulus: Option<Poly>) -> Result<FieldSpec, FieldError> {
    FieldSpec::new(q, m, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> FieldSpec {
        FieldSpec::new(2, 4, None).unwrap()
    }

    #[test]
    fn smallest_irreducible_degree4_is_x4_x_1() {
        let f = smallest_irreducible(2, 4).unwrap();
        assert_eq!(f, Poly::from_coeffs(&[1, 1, 0, 0, 1]));
    }

    #[test]
    fn f16_generator_is_x_and_satisfies_modulus() {
        let fs = f16();
        assert_eq!(fs.generator().coeffs(), &[0, 1, 0, 0]);
        // a^4 = a + 1, forced by the modulus
        let a = fs.generator().clone();
        let a4 = fs.pow(&a, 4);
        assert_eq!(a4, fs.from_coeffs(&[1, 1, 0, 0]));
    }

    #[test]
    fn base_field_m1() {
        let fs = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(fs.size(), 2);
        assert_eq!(fs.generator(), &fs.one());
        let fs3 = FieldSpec::new(3, 1, None).unwrap();
        assert_eq!(fs3.generator(), &fs3.from_base(2));
    }

    #[test]
    fn auto_modulus_for_f9_is_irreducible_by_exhaustion() {
        let fs = FieldSpec::new(3, 2, None).unwrap();
        let f = fs.modulus();
        // brute-force oracle: no monic linear factor divides f
        for a in 0..3 {
            let lin = Poly::from_coeffs(&[a, 1]);
            assert!(!f.rem(&lin, 3).is_zero(), "root found: x + {a}");
        }
    }

    #[test]
    fn rejects_non_prime_and_reducible() {
        assert_eq!(FieldSpec::new(4, 2, None).unwrap_err(), FieldError::NotPrime(4));
        let sq = Poly::from_coeffs(&[1, 0, 1]); // (x+1)^2 over F_2
        assert!(matches!(
            FieldSpec::new(2, 2, Some(sq)).unwrap_err(),
            FieldError::Reducible(..)
        ));
    }

    #[test]
    fn inverse_against_exhaustive_multiplication_table() {
        let fs = f16();
        let a5 = fs.pow(fs.generator(), 5);
        let inv = fs.inv(&a5).unwrap();
        // oracle: scan the whole field for the inverse
        let mut found = None;
        for x in fs.elements() {
            if fs.is_one(&fs.mul(&a5, &x)) {
                found = Some(x);
            }
        }
        assert_eq!(Some(inv.clone()), found);
        assert!(fs.is_one(&fs.mul(&inv, &a5)));
    }

    #[test]
    fn mul_identity_for_all_elements() {
        let fs = f16();
        for x in fs.elements() {
            assert_eq!(fs.mul(&x, &fs.one()), x);
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let fs = f16();
        assert_eq!(fs.inv(&fs.zero()).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn frobenius_identity_and_squaring() {
        let fs = f16();
        let a = fs.generator().clone();
        assert_eq!(fs.frobenius(&a, 0), a);
        assert_eq!(fs.frobenius(&a, 1), fs.mul(&a, &a));
        for x in fs.elements() {
            assert_eq!(fs.frobenius(&x, 4), x, "x^(q^m) must fix the field");
        }
    }

    #[test]
    fn frobenius_is_additive_exhaustively() {
        let fs = FieldSpec::new(2, 3, None).unwrap();
        let all: Vec<_> = fs.elements().collect();
        for a in &all {
            for b in &all {
                assert_eq!(
                    fs.frobenius(&fs.add(a, b), 1),
                    fs.add(&fs.frobenius(a, 1), &fs.frobenius(b, 1))
                );
            }
        }
    }

    #[test]
    fn multiplicative_order_golden_values() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(2, 5).unwrap(), 4);
        // oracle: 2^1..2^6 mod 9 = 2,4,8,7,5,1
        assert_eq!(multiplicative_order(2, 9).unwrap(), 6);
        assert_eq!(multiplicative_order(2, 11).unwrap(), 10);
        assert_eq!(multiplicative_order(2, 15).unwrap(), 4);
        assert_eq!(multiplicative_order(3, 13).unwrap(), 3);
        assert!(multiplicative_order(2, 4).is_err());
    }

    #[test]
    fn primitive_roots_of_unity() {
        let f8 = FieldSpec::new(2, 3, None).unwrap();
        let b = f8.primitive_root_of_unity(7).unwrap();
        assert_eq!(f8.order(&b).unwrap(), 7);
        assert!(!f8.is_one(&b));

        let fs = f16();
        let b5 = fs.primitive_root_of_unity(5).unwrap();
        // alpha^(15/5) = alpha^3, order checked exhaustively
        assert_eq!(b5, fs.pow(fs.generator(), 3));
        let mut acc = fs.one();
        for _ in 0..5 {
            acc = fs.mul(&acc, &b5);
        }
        assert!(fs.is_one(&acc));
        for e in 1..5u32 {
            assert!(!fs.is_one(&fs.pow(&b5, e as u128)));
        }

        assert_eq!(fs.primitive_root_of_unity(1).unwrap(), fs.one());
        assert!(fs.primitive_root_of_unity(7).is_err());
    }

    #[test]
    fn tau_polynomial_golden_values() {
        // q=2, L prime: tau = 1 + x
        assert_eq!(tau_polynomial(2, 7).unwrap(), Poly::from_coeffs(&[1, 1]));
        assert_eq!(tau_polynomial(2, 5).unwrap(), Poly::from_coeffs(&[1, 1]));
        // (x^9 - 1) / (x^6 + x^3 + 1) = x^3 + 1 over F_2
        assert_eq!(tau_polynomial(2, 9).unwrap(), Poly::from_coeffs(&[1, 0, 0, 1]));
        assert!(tau_polynomial(2, 4).is_err());
    }

    #[test]
    fn tau_times_cyclotomic_is_x_l_minus_one() {
        for (q, l) in [(2u32, 5u64), (2, 7), (2, 9), (2, 15), (3, 5), (3, 7), (3, 13)] {
            let tau = tau_polynomial(q, l).unwrap();
            let phi = cyclotomic_polynomial(q, l).unwrap();
            assert_eq!(tau.mul(&phi, q), Poly::x_pow_minus_one(l as usize, q));
        }
    }

    #[test]
    fn irreducibility_matches_trial_division_oracle() {
        // oracle: divide by every monic polynomial of degree 1..=deg/2
        fn oracle(f: &Poly, q: Fq) -> bool {
            let n = match f.degree() {
                None | Some(0) => return false,
                Some(1) => return true,
                Some(n) => n,
            };
            for d in 1..=n / 2 {
                let count = (q as u64).pow(d as u32);
                for idx in 0..count {
                    let mut coeffs = vec![0; d + 1];
                    let mut v = idx;
                    for c in coeffs.iter_mut().take(d) {
                        *c = (v % q as u64) as Fq;
                        v /= q as u64;
                    }
                    coeffs[d] = 1;
                    let g = Poly::from_coeffs(&coeffs);
                    if f.rem(&g, q).is_zero() {
                        return false;
                    }
                }
            }
            true
        }

        assert!(is_irreducible(&Poly::from_coeffs(&[1, 1, 0, 0, 1]), 2));
        assert!(!is_irreducible(&Poly::from_coeffs(&[1, 0, 1]), 2)); // (x+1)^2
        assert!(is_irreducible(&Poly::from_coeffs(&[1, 0, 0, 1, 0, 0, 1]), 2));

        for q in [2u32, 3] {
            for deg in 2..=6usize {
                for idx in 0..(q as u64).pow(deg as u32) {
                    let mut coeffs = vec![0; deg + 1];
                    let mut v = idx;
                    for c in coeffs.iter_mut().take(deg) {
                        *c = (v % q as u64) as Fq;
                        v /= q as u64;
                    }
                    coeffs[deg] = 1;
                    let f = Poly::from_coeffs(&coeffs);
                    assert_eq!(is_irreducible(&f, q), oracle(&f, q), "q={q} f={f}");
                }
            }
        }
    }

    #[test]
    fn generator_order_is_full() {
        for (q, m) in [(2u64, 3usize), (2, 4), (3, 2), (5, 2), (2, 6)] {
            let fs = FieldSpec::new(q, m, None).unwrap();
            let full = fs.size() - 1;
            assert_eq!(fs.order(fs.generator()).unwrap(), full);
        }
    }

    #[test]
    fn order_divides_totient() {
        for l in [5u64, 7, 9, 11, 13, 15, 21] {
            for q in [2u64, 3] {
                if gcd(q, l) != 1 {
                    continue;
                }
                let m = multiplicative_order(q, l).unwrap();
                let totient = (1..l).filter(|&j| gcd(j, l) == 1).count() as u64;
                assert_eq!(totient % m, 0);
            }
        }
    }

    #[test]
    fn poly_parse_roundtrip() {
        let p = Poly::parse("1,1,0,0,1", 2).unwrap();
        assert_eq!(p, Poly::from_coeffs(&[1, 1, 0, 0, 1]));
        assert_eq!(p.to_string(), "1,1,0,0,1");
        assert!(Poly::parse("1,x", 2).is_err());
    }
}
