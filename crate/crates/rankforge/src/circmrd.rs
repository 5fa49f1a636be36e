//! Rank-metric codes built from circular-shift operations over `F_q`.
//!
//! A code instance is determined by `(q, L, k, n)`, a list of shift
//! exponents, a variant, and a recipe for the pair `(G_L, H_L)`:
//!
//! - variant `C1` encodes with `P = G_L`, `Q = H_L`;
//! - variant `C2` encodes with `P = G_L`, `Q = tau(C_L) G_L^T`, which reuses
//!   a common factor and encodes with fewer XORs.
//!
//! Codewords are `Delta(m (I_k (x) P) Psi (I_n (x) Q))`, where `Psi` is the
//! block matrix of circulant powers `C_L^(q^s l_i)`. Everything stays over
//! `F_q`; the auxiliary matrices `U`, `U'` over `F_{q^{m_L}}` certify the
//! construction and drive the cross-checkers: the `T` bridge between the two
//! variants, the matrix-form encoding oracle, the Gabidulin coincidence test
//! and the generalized sum-of-Gabidulin view.

use std::fmt;

use thiserror::Error;

use crate::field::{
    multiplicative_order, tau_polynomial, FieldElement, FieldError, FieldSpec, Fq, Poly,
};
use crate::gabidulin::{
    codebooks_equal, for_each_in_span, span_codebook, Basis, GabidulinError,
    GabidulinParams,
};
use crate::linalg::{
    cyclic_shift_matrix, element_matrix, m_o, rotate_right, similar_to_field_mult, LinalgError,
    MatFq, MatFqm,
};

pub use crate::gabidulin::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("construction produced entries outside F_q")]
    NotOverBaseField,
    #[error("enumeration of {needed} messages exceeds the cap {cap}")]
    EnumerationTooLarge { needed: u128, cap: u128 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Gabidulin(#[from] GabidulinError),
    #[error("cannot parse instance: {0}")]
    Parse(String),
}

impl From<LinalgError> for CircError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotOverBaseField => CircError::NotOverBaseField,
            other => CircError::PreconditionViolated(other.to_string()),
        }
    }
}

/// `{ 1 <= j <= L-1 : gcd(j, L) = 1 }` ascending, plus its cardinality `J`
/// (the Euler totient).
pub fn coprime_set(l: usize) -> (Vec<usize>, usize) {
    let set: Vec<usize> = (1..l).filter(|&j| gcd(j, l) == 1).collect();
    let j = set.len();
    (set, j)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut b = base % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn eval_poly(fs: &FieldSpec, p: &Poly, x: &FieldElement) -> FieldElement {
    let mut acc = fs.zero();
    for i in (0..p.coeffs().len()).rev() {
        acc = fs.mul(&acc, x);
        acc = fs.add(&acc, &fs.from_base(p.coeff(i)));
    }
    acc
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    C1,
    C2,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant, CircError> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(Variant::C1),
            "c2" => Ok(Variant::C2),
            other => Err(CircError::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::C1 => write!(f, "c1"),
            Variant::C2 => write!(f, "c2"),
        }
    }
}

/// How the pair `(G_L, H_L)` is obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PqChoice {
    /// `U` is the truncated Vandermonde `V_L`; gives `G_L = [I_J 0]` and
    /// `H_L = [I_J A]^T`.
    InstanceA,
    /// `U'` is the truncated `V~_L`; gives `G_L = [A I_J]` and
    /// `H_L = [0 I_J]^T`, with the same `A`.
    InstanceB,
    /// A caller-supplied pair, accepted only if the derived `U`, `U'`
    /// satisfy the certifying conditions.
    User { p: MatFq, q: MatFq },
}

impl fmt::Display for PqChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PqChoice::InstanceA => write!(f, "a"),
            PqChoice::InstanceB => write!(f, "b"),
            PqChoice::User { .. } => write!(f, "user"),
        }
    }
}

/// Full recipe for one circular-shift code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircCodeParams {
    pub q: Fq,
    pub l: usize,
    pub k: usize,
    pub n: usize,
    /// Shift exponents `l_0 .. l_{n-1}`, each in `[0, L)`. Distinctness is
    /// not enforced here so that `validate_pq` can report the resulting
    /// rank failure.
    pub exponents: Vec<usize>,
    pub variant: Variant,
    pub pq: PqChoice,
}

impl CircCodeParams {
    pub fn new(
        q: u64,
        l: usize,
        k: usize,
        n: usize,
        exponents: Vec<usize>,
        variant: Variant,
        pq: PqChoice,
    ) -> Result<CircCodeParams, CircError> {
        if !crate::field::is_prime(q) {
            return Err(CircError::Field(FieldError::NotPrime(q)));
        }
        if l < 2 || gcd(q as usize, l) != 1 {
            return Err(CircError::Field(FieldError::NotCoprime { q, l: l as u64 }));
        }
        let m_l = multiplicative_order(q, l as u64)? as usize;
        if k == 0 || n == 0 || k > n {
            return Err(CircError::PreconditionViolated(format!(
                "need 1 <= k <= n, got k={k} n={n}"
            )));
        }
        if n > m_l {
            return Err(CircError::PreconditionViolated(format!(
                "n = {n} exceeds m_L = {m_l} (codes with m_L < n <= J do not exist here)"
            )));
        }
        if exponents.len() != n {
            return Err(CircError::DimMismatch(format!(
                "{} exponents for n = {n}",
                exponents.len()
            )));
        }
        if let Some(&bad) = exponents.iter().find(|&&e| e >= l) {
            return Err(CircError::PreconditionViolated(format!(
                "exponent {bad} out of range [0, {l})"
            )));
        }
        Ok(CircCodeParams {
            q: q as Fq,
            l,
            k,
            n,
            exponents,
            variant,
            pq,
        })
    }

    pub fn message_len(&self) -> usize {
        let (_, j) = coprime_set(self.l);
        j * self.k
    }
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// A realized code: the encoder pair plus the auxiliary data over
/// `F_{q^{m_L}}` that certifies it and feeds the checkers.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    params: CircCodeParams,
    j: usize,
    m_l: usize,
    coprimes: Vec<usize>,
    field: FieldSpec,
    beta: FieldElement,
    g: MatFq,
    h: MatFq,
    p: MatFq,
    q_enc: MatFq,
    u: MatFqm,
    u_prime: MatFqm,
    tau: Poly,
    t: MatFq,
}

impl CodeInstance {
    pub fn params(&self) -> &CircCodeParams {
        &self.params
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn m_l(&self) -> usize {
        self.m_l
    }

    pub fn coprimes(&self) -> &[usize] {
        &self.coprimes
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn g_matrix(&self) -> &MatFq {
        &self.g
    }

    pub fn h_matrix(&self) -> &MatFq {
        &self.h
    }

    /// The encoder `P` (always `G_L`).
    pub fn p(&self) -> &MatFq {
        &self.p
    }

    /// The encoder `Q`: `H_L` for C1, `tau(C_L) G_L^T` for C2.
    pub fn q_matrix(&self) -> &MatFq {
        &self.q_enc
    }

    pub fn u(&self) -> &MatFqm {
        &self.u
    }

    pub fn u_prime(&self) -> &MatFqm {
        &self.u_prime
    }

    pub fn tau(&self) -> &Poly {
        &self.tau
    }

    /// The full-rank bridge with `C2 = T C1`.
    pub fn t_matrix(&self) -> &MatFq {
        &self.t
    }

    pub fn message_len(&self) -> usize {
        self.j * self.params.k
    }

    /// Column of `U` (the certifying matrix) at index `j`.
    pub fn u_column(&self, j: usize) -> Vec<FieldElement> {
        self.u.column(j)
    }
}

/// Builds the pair `(G_L, H_L)`, the encoder matrices and all auxiliary
/// data. Fails when the requested dimensions are out of range, when a
/// canonical construction lands outside `F_q` (cannot happen for instances
/// A/B), or when a user-supplied pair does not satisfy the certifying
/// conditions.
pub fn build_pq(params: CircCodeParams) -> Result<CodeInstance, CircError> {
    let (coprimes, j) = coprime_set(params.l);
    let m_l = multiplicative_order(params.q as u64, params.l as u64)? as usize;
    let field = FieldSpec::new(params.q as u64, m_l, None)?;
    let beta = field.primitive_root_of_unity(params.l as u64)?;
    let l = params.l;
    let q = params.q;
    let lf = (l as u32 % q) as Fq;
    let lf_inv = crate::field::fq_inverse(lf, q);
    let lf_inv_el = field.from_base(lf_inv);

    let beta_inv = field.pow(&beta, l as u128 - 1);
    let v = MatFqm::from_fn(&field, l, l, |a, b| field.pow(&beta, (a * b) as u128));
    let vt = MatFqm::from_fn(&field, l, l, |a, b| field.pow(&beta_inv, (a * b) as u128));

    let (u, u_prime) = match &params.pq {
        PqChoice::InstanceA => {
            // U = lf^-1 * (first J rows of V_L)
            let u = MatFqm::from_fn(&field, j, l, |a, b| {
                field.mul(&lf_inv_el, &v[(a, b)])
            });
            let u_prime = complete_counterpart(&field, &u, &coprimes, j, l, lf_inv)?;
            (u, u_prime)
        }
        PqChoice::InstanceB => {
            // U' = lf^-1 * (last J rows of V~_L)
            let off = l - j;
            let u_prime = MatFqm::from_fn(&field, j, l, |a, b| {
                field.mul(&lf_inv_el, &vt[(off + a, b)])
            });
            let u = complete_counterpart(&field, &u_prime, &coprimes, j, l, lf_inv)?;
            (u, u_prime)
        }
        PqChoice::User { p, q: h } => {
            if p.rows() != j || p.cols() != l || h.rows() != l || h.cols() != j {
                return Err(CircError::DimMismatch(format!(
                    "expected P {j}x{l} and Q {l}x{j}"
                )));
            }
            if p.q() != q || h.q() != q {
                return Err(CircError::DimMismatch("P/Q over the wrong field".into()));
            }
            // G = U V~  =>  U = lf^-1 G V;  H = V U'^T  =>  U' = lf^-1 H^T V~
            let u = MatFqm::from_fq(&field, p)
                .mul(&field, &v)
                .scalar_mul(&field, &lf_inv_el);
            let u_prime = MatFqm::from_fq(&field, &h.transpose())
                .mul(&field, &vt)
                .scalar_mul(&field, &lf_inv_el);
            check_u_conditions(&field, &u, &u_prime, &coprimes, j, l, lf_inv)?;
            (u, u_prime)
        }
    };

    let g = u.mul(&field, &vt).to_fq(&field)?;
    let h = v.mul(&field, &u_prime.transpose()).to_fq(&field)?;
    if let PqChoice::User { p, q: hq } = &params.pq {
        debug_assert_eq!(&g, p);
        debug_assert_eq!(&h, hq);
    }

    let tau = tau_polynomial(q, l as u64)?;
    let t = t_matrix_from_aux(&field, &u, &coprimes, &tau, &beta, lf)?;

    // Lemma-2 identity gates the T matrix: G C^l tau(C) G^T = G C^l H T^T
    let c1 = cyclic_shift_matrix(l, 1, q);
    let tau_c = c1.poly_at(&tau);
    let t_t = t.transpose();
    let mut c_pow = MatFq::identity(l, q);
    for _ in 0..l {
        let gc = g.mul(&c_pow);
        let lhs = gc.mul(&tau_c).mul(&g.transpose());
        let rhs = gc.mul(&h).mul(&t_t);
        if lhs != rhs {
            return Err(CircError::PreconditionViolated(
                "T bridge identity failed for the supplied pair".into(),
            ));
        }
        c_pow = c_pow.mul(&c1);
    }

    let q_enc = match params.variant {
        Variant::C1 => h.clone(),
        Variant::C2 => tau_c.mul(&g.transpose()),
    };

    Ok(CodeInstance {
        p: g.clone(),
        params,
        j,
        m_l,
        coprimes,
        field,
        beta,
        g,
        h,
        q_enc,
        u,
        u_prime,
        tau,
        t,
    })
}

/// Given one of `U`/`U'`, builds the other so that
/// `[other_j]^T_{j in J} = lf^-1 [given_j]^{-1}_{j in J}` with zero columns
/// outside the coprime set.
fn complete_counterpart(
    field: &FieldSpec,
    given: &MatFqm,
    coprimes: &[usize],
    j: usize,
    l: usize,
    lf_inv: Fq,
) -> Result<MatFqm, CircError> {
    let restricted = MatFqm::from_fn(field, j, j, |a, b| given[(a, coprimes[b])].clone());
    let inv = restricted
        .inverse(field)
        .map_err(|_| CircError::PreconditionViolated("U block is singular".into()))?;
    let inv_t = inv.transpose().scalar_mul(field, &field.from_base(lf_inv));
    let mut out = MatFqm::zeros(field, j, l);
    for (col, &jj) in coprimes.iter().enumerate() {
        for r in 0..j {
            out[(r, jj)] = inv_t[(r, col)].clone();
        }
    }
    Ok(out)
}

fn check_u_conditions(
    field: &FieldSpec,
    u: &MatFqm,
    u_prime: &MatFqm,
    coprimes: &[usize],
    j: usize,
    _l: usize,
    lf_inv: Fq,
) -> Result<(), CircError> {
    let u_j = MatFqm::from_fn(field, j, j, |a, b| u[(a, coprimes[b])].clone());
    if u_j.rank(field) != j {
        return Err(CircError::PreconditionViolated(
            "[u_j] restricted to the coprime set is not full rank".into(),
        ));
    }
    let up_j = MatFqm::from_fn(field, j, j, |a, b| u_prime[(a, coprimes[b])].clone());
    let prod = up_j.transpose().mul(field, &u_j);
    let want = MatFqm::identity(field, j).scalar_mul(field, &field.from_base(lf_inv));
    if prod != want {
        return Err(CircError::PreconditionViolated(
            "[u'_j]^T is not lf^-1 [u_j]^-1 on the coprime set".into(),
        ));
    }
    let zero_outside = |m: &MatFqm| {
        (0.._l_cols(m)).all(|c| coprimes.contains(&c) || (0..j).all(|r| m[(r, c)].is_zero()))
    };
    if !zero_outside(u) && !zero_outside(u_prime) {
        return Err(CircError::PreconditionViolated(
            "neither U nor U' vanishes outside the coprime set".into(),
        ));
    }
    Ok(())
}

fn _l_cols(m: &MatFqm) -> usize {
    m.cols()
}

fn t_matrix_from_aux(
    field: &FieldSpec,
    u: &MatFqm,
    coprimes: &[usize],
    tau: &Poly,
    beta: &FieldElement,
    lf: Fq,
) -> Result<MatFq, CircError> {
    let j = coprimes.len();
    let l = u.cols();
    let left = MatFqm::from_fn(field, j, j, |a, b| u[(a, l - coprimes[b])].clone());
    let right = MatFqm::from_fn(field, j, j, |a, b| u[(a, coprimes[b])].clone()).transpose();
    let diag = MatFqm::from_fn(field, j, j, |a, b| {
        if a == b {
            eval_poly(field, tau, &field.pow(beta, coprimes[a] as u128))
        } else {
            field.zero()
        }
    });
    let t = left
        .mul(field, &diag)
        .mul(field, &right)
        .scalar_mul(field, &field.from_base(lf));
    let t = t.to_fq(field)?;
    if t.rank() != j {
        return Err(CircError::PreconditionViolated("T is not full rank".into()));
    }
    Ok(t)
}

/// The pair with `H_L = [I_J 0]^T` and `G_L` derived from the certifying
/// conditions. This is the C1-side shape required by the generalized
/// sum-of-Gabidulin view; it is not produced by instance A or B.
pub fn identity_h_pair(q: u64, l: usize) -> Result<(MatFq, MatFq), CircError> {
    let (coprimes, j) = coprime_set(l);
    let m_l = multiplicative_order(q, l as u64)? as usize;
    let field = FieldSpec::new(q, m_l, None)?;
    let beta = field.primitive_root_of_unity(l as u64)?;
    let qq = q as Fq;
    let lf_inv = crate::field::fq_inverse((l as u32) % qq, qq);
    let lf_inv_el = field.from_base(lf_inv);
    let beta_inv = field.pow(&beta, l as u128 - 1);
    // U' = lf^-1 * (first J rows of V~_L); U completed with zeros outside J
    let u_prime = MatFqm::from_fn(&field, j, l, |a, b| {
        field.mul(&lf_inv_el, &field.pow(&beta_inv, (a * b) as u128))
    });
    let u = complete_counterpart(&field, &u_prime, &coprimes, j, l, lf_inv)?;
    let vt = MatFqm::from_fn(&field, l, l, |a, b| field.pow(&beta_inv, (a * b) as u128));
    let g = u.mul(&field, &vt).to_fq(&field)?;
    let h = MatFq::identity(j, qq).hstack(&MatFq::zeros(j, l - j, qq)).transpose();
    Ok((g, h))
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

/// One codeword with the message that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub matrix: MatFq,
    pub message: Vec<Fq>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodePath {
    /// Explicit `m (I_k (x) P) Psi (I_n (x) Q)` products.
    Generic,
    /// Shift-and-accumulate columns; for C2, the common `tau(C_L)` factor is
    /// applied once per message block and reused across columns.
    Fast,
}

/// The `kL x nL` block matrix whose `(s, i)` block is `C_L^(q^s l_i)`.
pub fn psi_block(params: &CircCodeParams) -> MatFq {
    let l = params.l;
    let q = params.q;
    let mut rows: Option<MatFq> = None;
    for s in 0..params.k {
        let mut row: Option<MatFq> = None;
        for &li in &params.exponents {
            let e = pow_mod(q as u64, s as u64, l as u64) as usize * li % l;
            let block = cyclic_shift_matrix(l, e as i64, q);
            row = Some(match row {
                None => block,
                Some(acc) => acc.hstack(&block),
            });
        }
        let row = row.expect("n >= 1");
        rows = Some(match rows {
            None => row,
            Some(acc) => acc.vstack(&row),
        });
    }
    rows.expect("k >= 1")
}

impl CodeInstance {
    /// Encodes a message of `J*k` base-field digits.
    pub fn encode(&self, m: &[Fq], path: EncodePath) -> Result<Codeword, CircError> {
        if m.len() != self.message_len() {
            return Err(CircError::DimMismatch(format!(
                "message length {} != J*k = {}",
                m.len(),
                self.message_len()
            )));
        }
        let matrix = match path {
            EncodePath::Generic => self.encode_generic(m),
            EncodePath::Fast => self.encode_fast(m),
        };
        Ok(Codeword {
            matrix,
            message: m.to_vec(),
        })
    }

    fn encode_generic(&self, m: &[Fq]) -> MatFq {
        let q = self.params.q;
        let ik = MatFq::identity(self.params.k, q);
        let in_ = MatFq::identity(self.params.n, q);
        let big = ik
            .kron(&self.p)
            .mul(&psi_block(&self.params))
            .mul(&in_.kron(&self.q_enc));
        let c = big.transpose().mul_vec(m); // row * big
        // Delta: chop into n blocks of J and lay them out as columns
        let mut out = MatFq::zeros(self.j, self.params.n, q);
        for i in 0..self.params.n {
            for r in 0..self.j {
                out[(r, i)] = c[i * self.j + r];
            }
        }
        out
    }

    fn encode_fast(&self, m: &[Fq]) -> MatFq {
        let q = self.params.q;
        let l = self.params.l;
        let k = self.params.k;
        let n = self.params.n;
        let mut out = MatFq::zeros(self.j, n, q);
        match self.params.variant {
            Variant::C1 => {
                // per column: sum the shifted m_s G_L, then apply H_L once
                let gs: Vec<Vec<Fq>> = (0..k)
                    .map(|s| self.g.transpose().mul_vec(&m[s * self.j..(s + 1) * self.j]))
                    .collect();
                for (i, &li) in self.params.exponents.iter().enumerate() {
                    let mut acc = vec![0u32; l];
                    for (s, g) in gs.iter().enumerate() {
                        let e = pow_mod(q as u64, s as u64, l as u64) as usize * li % l;
                        let rot = rotate_right(g, e);
                        for (a, r) in acc.iter_mut().zip(&rot) {
                            *a = (*a + *r) % q;
                        }
                    }
                    let col = self.h.transpose().mul_vec(&acc);
                    for r in 0..self.j {
                        out[(r, i)] = col[r];
                    }
                }
            }
            Variant::C2 => {
                // precompute m_s G_L tau(C_L) once per block, reuse per column
                let c1 = cyclic_shift_matrix(l, 1, q);
                let tau_c = c1.poly_at(&self.tau).transpose();
                let mbars: Vec<Vec<Fq>> = (0..k)
                    .map(|s| {
                        let g = self.g.transpose().mul_vec(&m[s * self.j..(s + 1) * self.j]);
                        tau_c.mul_vec(&g)
                    })
                    .collect();
                let gt_t = self.g.clone(); // (G^T)^T, to apply v G^T as G v^T
                for (i, &li) in self.params.exponents.iter().enumerate() {
                    let mut acc = vec![0u32; self.j];
                    for (s, mbar) in mbars.iter().enumerate() {
                        let e = pow_mod(q as u64, s as u64, l as u64) as usize * li % l;
                        let shifted = rotate_right(mbar, e);
                        let contrib = gt_t.mul_vec(&shifted);
                        for (a, r) in acc.iter_mut().zip(&contrib) {
                            *a = (*a + *r) % q;
                        }
                    }
                    for r in 0..self.j {
                        out[(r, i)] = acc[r];
                    }
                }
            }
        }
        out
    }

    /// Codewords for the unit messages, in message order. The code is
    /// `F_q`-linear, so these span the codebook.
    pub fn basis_codewords(&self) -> Vec<MatFq> {
        let d = self.message_len();
        (0..d)
            .map(|i| {
                let mut m = vec![0; d];
                m[i] = 1;
                self.encode(&m, EncodePath::Generic).expect("unit message").matrix
            })
            .collect()
    }

    fn check_cap(&self, cap: u128) -> Result<u128, CircError> {
        let needed = (self.params.q as u128)
            .checked_pow(self.message_len() as u32)
            .unwrap_or(u128::MAX);
        if needed > cap {
            return Err(CircError::EnumerationTooLarge { needed, cap });
        }
        Ok(needed)
    }

    /// The full codebook, `q^(Jk)` matrices in message-counting order.
    pub fn codebook(&self, cap: u128) -> Result<Vec<MatFq>, CircError> {
        self.check_cap(cap)?;
        Ok(span_codebook(self.params.q, &self.basis_codewords()))
    }

    /// Minimum rank over all nonzero codewords, by full enumeration.
    pub fn verify_mrd(&self, cap: u128) -> Result<MrdReport, CircError> {
        self.check_cap(cap)?;
        let words = self.basis_codewords();
        let mut min_rank = usize::MAX;
        let mut first = true;
        for_each_in_span(self.params.q, &words, |w| {
            if first {
                first = false;
                return;
            }
            let r = w.rank();
            if r < min_rank {
                min_rank = r;
            }
        });
        let d = self.params.n - self.params.k + 1;
        Ok(MrdReport {
            min_rank,
            is_mrd: min_rank == d,
            singleton_distance: d,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MrdReport {
    pub min_rank: usize,
    pub is_mrd: bool,
    /// `n - k + 1`, the rank the Singleton bound demands.
    pub singleton_distance: usize,
}

/// Parses a digit-string message, most significant block first.
pub fn message_from_digits(s: &str, q: Fq, len: usize) -> Result<Vec<Fq>, CircError> {
    let mut out = Vec::with_capacity(s.len());
    for ch in s.trim().chars() {
        let d = ch
            .to_digit(10)
            .ok_or_else(|| CircError::Parse(format!("bad message digit `{ch}`")))?;
        if d >= q {
            return Err(CircError::Parse(format!("digit {d} not in F_{q}")));
        }
        out.push(d);
    }
    if out.len() != len {
        return Err(CircError::DimMismatch(format!(
            "message length {} != J*k = {len}",
            out.len()
        )));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Outcome of the three structural checks behind the MRD guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// `rank(sum_i a_i P C^(l_i) Q) = J` for every nonzero `a` in `F_q^n`.
    pub rank_condition: bool,
    /// `(G C^i H)(G C^j H) = G C^(i+j) H` for all `0 <= i, j < L`.
    pub semigroup: bool,
    /// `G C^l H u_j = beta^(jl) u_j` for all `l` and coprime `j`.
    pub eigen_relation: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.rank_condition && self.semigroup && self.eigen_relation
    }
}

pub fn validate_pq(inst: &CodeInstance) -> ValidationReport {
    let q = inst.params.q;
    let l = inst.params.l;
    let j = inst.j;
    let mut failures = Vec::new();

    // (a) full rank of every nonzero combination of P C^(l_i) Q
    let blocks: Vec<MatFq> = inst
        .params
        .exponents
        .iter()
        .map(|&li| {
            inst.p
                .mul(&cyclic_shift_matrix(l, li as i64, q))
                .mul(&inst.q_enc)
        })
        .collect();
    let mut rank_condition = true;
    let mut first = true;
    for_each_in_span(q, &blocks, |m| {
        if first {
            first = false;
            return;
        }
        if rank_condition && m.rank() != j {
            rank_condition = false;
        }
    });
    if !rank_condition {
        failures.push("a nonzero combination of P C^(l_i) Q dropped rank".into());
    }

    // (b) semigroup law on the (G, H) pair
    let c1 = cyclic_shift_matrix(l, 1, q);
    let mut powers = Vec::with_capacity(l);
    let mut c_pow = MatFq::identity(l, q);
    for _ in 0..l {
        powers.push(inst.g.mul(&c_pow).mul(&inst.h));
        c_pow = c_pow.mul(&c1);
    }
    let mut semigroup = true;
    'outer: for a in 0..l {
        for b in 0..l {
            if powers[a].mul(&powers[b]) != powers[(a + b) % l] {
                semigroup = false;
                failures.push(format!("(G C^{a} H)(G C^{b} H) != G C^{} H", (a + b) % l));
                break 'outer;
            }
        }
    }

    // (c) eigen-relation on the columns of U
    let fs = &inst.field;
    let mut eigen_relation = true;
    'eigen: for l_exp in 0..l {
        let w = MatFqm::from_fq(fs, &powers[l_exp]);
        for &jj in &inst.coprimes {
            let u_col = inst.u.column(jj);
            let u_mat = MatFqm::from_fn(fs, inst.j, 1, |r, _| u_col[r].clone());
            let lhs = w.mul(fs, &u_mat);
            let scale = fs.pow(&inst.beta, (jj * l_exp) as u128);
            let rhs = u_mat.scalar_mul(fs, &scale);
            if lhs != rhs {
                eigen_relation = false;
                failures.push(format!("eigen relation failed at l={l_exp}, j={jj}"));
                break 'eigen;
            }
        }
    }

    ValidationReport {
        rank_condition,
        semigroup,
        eigen_relation,
        failures,
    }
}

// ---------------------------------------------------------------------------
// Matrix-form encoding oracle
// ---------------------------------------------------------------------------

impl CodeInstance {
    /// Independent route to the same codeword: assemble the evaluation
    /// matrix `L_m` of the q-linearized polynomials `L_{t_j}` (rows ordered
    /// by ascending coprime index) and multiply by the certifying matrix
    /// (`[u'_j]` for C1, `[u_{L-j}]` for C2). Must agree with `encode`
    /// bit-exactly.
    pub fn matrix_form_encode(&self, m: &[Fq]) -> Result<Codeword, CircError> {
        if m.len() != self.message_len() {
            return Err(CircError::DimMismatch(format!(
                "message length {} != J*k = {}",
                m.len(),
                self.message_len()
            )));
        }
        let fs = &self.field;
        let k = self.params.k;
        let n = self.params.n;
        let lf = fs.from_base((self.params.l as u32 % self.params.q) as Fq);

        // t[s][col] = lf * m_s . u_{d_col}
        let mut t = vec![vec![fs.zero(); self.j]; k];
        for s in 0..k {
            let ms = &m[s * self.j..(s + 1) * self.j];
            for (col, &d) in self.coprimes.iter().enumerate() {
                let mut acc = fs.zero();
                for (r, &coef) in ms.iter().enumerate() {
                    if coef != 0 {
                        acc = fs.add(&acc, &fs.scalar_mul(coef, &self.u[(r, d)]));
                    }
                }
                t[s][col] = fs.mul(&lf, &acc);
            }
        }

        let l_m = MatFqm::from_fn(fs, self.j, n, |row, col| {
            let d = self.coprimes[row];
            let x = fs.pow(&self.beta, (d * self.params.exponents[col]) as u128);
            let mut acc = fs.zero();
            let mut xq = x;
            for ts in t.iter() {
                acc = fs.add(&acc, &fs.mul(&ts[row], &xq));
                xq = fs.frobenius(&xq, 1);
            }
            match self.params.variant {
                Variant::C1 => acc,
                Variant::C2 => {
                    let taub = eval_poly(fs, &self.tau, &fs.pow(&self.beta, d as u128));
                    fs.mul(&acc, &taub)
                }
            }
        });

        let w = match self.params.variant {
            Variant::C1 => MatFqm::from_fn(fs, self.j, self.j, |r, c| {
                self.u_prime[(r, self.coprimes[c])].clone()
            }),
            Variant::C2 => MatFqm::from_fn(fs, self.j, self.j, |r, c| {
                self.u[(r, self.params.l - self.coprimes[c])].clone()
            }),
        };
        let matrix = w.mul(fs, &l_m).to_fq(fs)?;
        Ok(Codeword {
            matrix,
            message: m.to_vec(),
        })
    }
}

// ---------------------------------------------------------------------------
// Generalized sum-of-Gabidulin view
// ---------------------------------------------------------------------------

/// The block code `[sum_s M_(1,s); sum_s M_(2,s); ...]` built from
/// `(m_L x n)` Gabidulin codes on cyclotomic-coset data. Equals the
/// circular-shift codebook when the instance uses `H_L = [I_J 0]^T` (C1) or
/// `G_L = [I_J 0]` (C2).
#[derive(Debug, Clone)]
pub struct GeneralizedCode {
    field: FieldSpec,
    q: Fq,
    j: usize,
    m_l: usize,
    k: usize,
    n: usize,
    groups: usize,
    /// `B_(i,s)` bases, indexed `[i][s]`, each of length m_L.
    bases: Vec<Vec<Vec<FieldElement>>>,
    /// `F_s` evaluation sets, each of length n.
    eval_sets: Vec<Vec<FieldElement>>,
    epsilons: Vec<usize>,
    /// data for the per-message mapping from the parent instance
    u_eps: Vec<Vec<FieldElement>>,
    tau_eps: Vec<FieldElement>,
    variant: Variant,
}

pub fn generalized_gabidulin(inst: &CodeInstance) -> Result<GeneralizedCode, CircError> {
    let q = inst.params.q;
    let j = inst.j;
    let l = inst.params.l;
    let id_top = MatFq::identity(j, q)
        .hstack(&MatFq::zeros(j, l - j, q));
    match inst.params.variant {
        Variant::C1 => {
            if inst.h != id_top.transpose() {
                return Err(CircError::PreconditionViolated(
                    "the generalized view of a C1 code needs H_L = [I_J 0]^T".into(),
                ));
            }
        }
        Variant::C2 => {
            if inst.g != id_top {
                return Err(CircError::PreconditionViolated(
                    "the generalized view of a C2 code needs G_L = [I_J 0]".into(),
                ));
            }
        }
    }

    let fs = &inst.field;
    let m_l = inst.m_l;
    let groups = j / m_l;

    // cyclotomic cosets of the coprime set, keyed by their smallest member
    let mut seen = vec![false; l];
    let mut epsilons = Vec::new();
    for &start in &inst.coprimes {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut cur = start;
        loop {
            if seen[cur] {
                break;
            }
            seen[cur] = true;
            members.push(cur);
            cur = cur * (q as usize % l) % l;
        }
        debug_assert_eq!(members.len(), m_l);
        epsilons.push(*members.iter().min().expect("nonempty coset"));
    }
    epsilons.sort_unstable();
    debug_assert_eq!(epsilons.len(), groups);

    let mut bases = vec![vec![Vec::new(); groups]; groups];
    for (s, &eps) in epsilons.iter().enumerate() {
        for (i, base) in bases.iter_mut().enumerate() {
            let b: Vec<FieldElement> = (i * m_l..(i + 1) * m_l)
                .map(|t| fs.pow(&inst.beta, (t * (l - eps)) as u128))
                .collect();
            // Every coset basis really is a basis (full-rank M_o block)
            if m_o(fs, &b).rank(fs) != m_l {
                return Err(CircError::PreconditionViolated(
                    "coset elements failed to form a basis".into(),
                ));
            }
            base[s] = b;
        }
    }
    let eval_sets: Vec<Vec<FieldElement>> = epsilons
        .iter()
        .map(|&eps| {
            inst.params
                .exponents
                .iter()
                .map(|&li| fs.pow(&inst.beta, (eps * li) as u128))
                .collect()
        })
        .collect();
    let u_eps: Vec<Vec<FieldElement>> = epsilons.iter().map(|&eps| inst.u.column(eps)).collect();
    let tau_eps: Vec<FieldElement> = epsilons
        .iter()
        .map(|&eps| eval_poly(fs, &inst.tau, &fs.pow(&inst.beta, eps as u128)))
        .collect();

    Ok(GeneralizedCode {
        field: fs.clone(),
        q,
        j,
        m_l,
        k: inst.params.k,
        n: inst.params.n,
        groups,
        bases,
        eval_sets,
        epsilons,
        u_eps,
        tau_eps,
        variant: inst.params.variant,
    })
}

impl GeneralizedCode {
    pub fn epsilons(&self) -> &[usize] {
        &self.epsilons
    }

    pub fn basis(&self, i: usize, s: usize) -> &[FieldElement] {
        &self.bases[i][s]
    }

    pub fn eval_set(&self, s: usize) -> &[FieldElement] {
        &self.eval_sets[s]
    }

    /// Codeword for one tuple of coefficient rows `lambda_s` in
    /// `F_{q^{m_L}}^k`: block row i is `sum_s M_o(B_(i,s)) L_(lambda_s)`.
    pub fn codeword_for_lambdas(&self, lambdas: &[Vec<FieldElement>]) -> MatFq {
        assert_eq!(lambdas.len(), self.groups, "one lambda row per coset");
        let fs = &self.field;
        let mut out = MatFq::zeros(self.j, self.n, self.q);
        for i in 0..self.groups {
            for s in 0..self.groups {
                // evaluations L_lambda(f_t), then entries by trace
                let evals: Vec<FieldElement> = self.eval_sets[s]
                    .iter()
                    .map(|x| {
                        let mut acc = fs.zero();
                        let mut xq = x.clone();
                        for lam in lambdas[s].iter() {
                            acc = fs.add(&acc, &fs.mul(lam, &xq));
                            xq = fs.frobenius(&xq, 1);
                        }
                        acc
                    })
                    .collect();
                for r in 0..self.m_l {
                    for t in 0..self.n {
                        let val = fs.trace(&fs.mul(&self.bases[i][s][r], &evals[t]));
                        let cell = &mut out[(i * self.m_l + r, t)];
                        *cell = (*cell + val) % self.q;
                    }
                }
            }
        }
        out
    }

    /// Codeword for a parent-instance message, mapped through
    /// `lambda_(i,s) = m_i . u_(eps_s)` (with the `tau(beta^eps_s)` factor
    /// for C2). Must equal the parent encoder's output.
    pub fn codeword_for_message(&self, m: &[Fq]) -> MatFq {
        assert_eq!(m.len(), self.j * self.k, "message length");
        let fs = &self.field;
        let lambdas: Vec<Vec<FieldElement>> = (0..self.groups)
            .map(|s| {
                (0..self.k)
                    .map(|i| {
                        let ms = &m[i * self.j..(i + 1) * self.j];
                        let mut acc = fs.zero();
                        for (r, &coef) in ms.iter().enumerate() {
                            if coef != 0 {
                                acc = fs.add(&acc, &fs.scalar_mul(coef, &self.u_eps[s][r]));
                            }
                        }
                        if self.variant == Variant::C2 {
                            acc = fs.mul(&acc, &self.tau_eps[s]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        self.codeword_for_lambdas(&lambdas)
    }

    /// The full codebook, spanned over `F_q` by unit lambda choices.
    pub fn codebook(&self, cap: u128) -> Result<Vec<MatFq>, CircError> {
        let dims = self.groups * self.k * self.m_l;
        let needed = (self.q as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
        if needed > cap {
            return Err(CircError::EnumerationTooLarge { needed, cap });
        }
        let fs = &self.field;
        let mut words = Vec::with_capacity(dims);
        for s in 0..self.groups {
            for i in 0..self.k {
                for c in 0..self.m_l {
                    let mut lambdas = vec![vec![fs.zero(); self.k]; self.groups];
                    let mut coeffs = vec![0; self.m_l];
                    coeffs[c] = 1;
                    lambdas[s][i] = fs.from_coeffs(&coeffs);
                    words.push(self.codeword_for_lambdas(&lambdas));
                }
            }
        }
        Ok(span_codebook(self.q, &words))
    }
}

// ---------------------------------------------------------------------------
// Coincidence with Gabidulin codes
// ---------------------------------------------------------------------------

/// Verdict of the coincidence checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoincidenceVerdict {
    /// `J = m_L`: the code IS a Gabidulin code, on the returned basis.
    Coincides { basis: Vec<FieldElement> },
    /// `J != m_L` with arithmetic exponents: provably different from every
    /// Gabidulin code; the witness is the reducible minimal polynomial of
    /// `G C^e H`.
    Differs { exponent: usize, witness: Poly },
    /// Outside both decided cases; no verdict is guessed.
    Undetermined { reason: String },
}

/// Decides whether the instance coincides with a Gabidulin code, in the two
/// cases where that question has an answer; reports `Undetermined`
/// otherwise.
pub fn gabidulin_coincidence(inst: &CodeInstance, cap: u128) -> Result<CoincidenceVerdict, CircError> {
    let fs = &inst.field;
    let q = inst.params.q;
    let l = inst.params.l;

    if inst.j == inst.m_l {
        // the second column of U must be a basis of F_{q^J}
        let u1 = inst.u.column(1);
        let basis = match Basis::new(fs, u1.clone()) {
            Ok(b) => b,
            Err(_) => {
                return Ok(CoincidenceVerdict::Undetermined {
                    reason: "u_1 failed the basis determinant test".into(),
                })
            }
        };
        // G C^l H = V A(beta^l) V^-1 for every l
        let v = crate::gabidulin::change_of_basis_to_power(fs, &basis);
        let v_inv = v.inverse().map_err(|_| CircError::NotOverBaseField)?;
        let c1 = cyclic_shift_matrix(l, 1, q);
        let mut c_pow = MatFq::identity(l, q);
        for e in 0..l {
            let lhs = inst.g.mul(&c_pow).mul(&inst.h);
            let a = element_matrix(fs, &fs.pow(&inst.beta, e as u128));
            if lhs != v.mul(&a).mul(&v_inv) {
                return Ok(CoincidenceVerdict::Undetermined {
                    reason: format!("field-multiplication identity failed at shift {e}"),
                });
            }
            c_pow = c_pow.mul(&c1);
        }
        // codebook equality with the Gabidulin code on beta^(l_i)
        let betas: Vec<FieldElement> = inst
            .params
            .exponents
            .iter()
            .map(|&li| fs.pow(&inst.beta, li as u128))
            .collect();
        let gab = GabidulinParams::new(fs.clone(), betas, inst.params.k, basis.clone())?;
        let compare_basis = match inst.params.variant {
            Variant::C1 => basis.clone(),
            Variant::C2 => {
                // C2 = T C1 = M_(B T^-1)(V)
                let t_inv = inst.t.inverse().map_err(|_| CircError::NotOverBaseField)?;
                let elems: Vec<FieldElement> = (0..inst.j)
                    .map(|c| {
                        let mut acc = fs.zero();
                        for (r, b) in basis.elements().iter().enumerate() {
                            acc = fs.add(&acc, &fs.scalar_mul(t_inv[(r, c)], b));
                        }
                        acc
                    })
                    .collect();
                Basis::new(fs, elems)?
            }
        };
        let lhs = inst.codebook(cap)?;
        let rhs = gab.codebook_counterpart(&compare_basis, cap)?;
        if !codebooks_equal(&lhs, &rhs) {
            return Ok(CoincidenceVerdict::Undetermined {
                reason: "codebooks disagreed despite the identity checks".into(),
            });
        }
        return Ok(CoincidenceVerdict::Coincides {
            basis: compare_basis.elements().to_vec(),
        });
    }

    // J != m_L: the decided case needs k < n and exponents l_j = c'j + c
    // with sum_(j<k) c' q^j coprime to L.
    if inst.params.k >= inst.params.n {
        return Ok(CoincidenceVerdict::Undetermined {
            reason: "k = n is degenerate; every MRD code is the full matrix space".into(),
        });
    }
    let exps = &inst.params.exponents;
    let c = exps[0];
    let c_prime = (exps[1] + l - exps[0]) % l;
    let arithmetic = c_prime >= 1
        && exps
            .iter()
            .enumerate()
            .all(|(jj, &e)| e == (c + c_prime * jj) % l);
    if !arithmetic {
        return Ok(CoincidenceVerdict::Undetermined {
            reason: "exponents are not an arithmetic progression mod L".into(),
        });
    }
    let mut sum = 0usize;
    for s in 0..inst.params.k {
        sum = (sum + c_prime * pow_mod(q as u64, s as u64, l as u64) as usize) % l;
    }
    if gcd(sum, l) != 1 {
        return Ok(CoincidenceVerdict::Undetermined {
            reason: format!("sum of c' q^j = {sum} shares a factor with L = {l}"),
        });
    }
    let m = inst
        .g
        .mul(&cyclic_shift_matrix(l, sum as i64, q))
        .mul(&inst.h);
    let verdict = similar_to_field_mult(&m);
    if verdict.similar {
        return Ok(CoincidenceVerdict::Undetermined {
            reason: "similarity test unexpectedly passed".into(),
        });
    }
    Ok(CoincidenceVerdict::Differs {
        exponent: sum,
        witness: verdict.witness_poly,
    })
}

// ---------------------------------------------------------------------------
// Codebook transforms and comparisons
// ---------------------------------------------------------------------------

/// Applies a fixed left factor to every codeword.
pub fn transform_codebook(t: &MatFq, book: &[MatFq]) -> Vec<MatFq> {
    book.iter().map(|w| t.mul(w)).collect()
}

/// Multiset equality of two codebooks.
pub fn code_set_equal(a: &[MatFq], b: &[MatFq]) -> bool {
    codebooks_equal(a, b)
}

/// Counterpart codebook `{M_B(u G)}` of a Gabidulin code, for comparisons.
pub fn gabidulin_counterpart_codebook(
    params: &GabidulinParams,
    basis: &Basis,
    cap: u128,
) -> Result<Vec<MatFq>, CircError> {
    Ok(params.codebook_counterpart(basis, cap)?)
}

// ---------------------------------------------------------------------------
// Instance serialization
// ---------------------------------------------------------------------------

/// Serializes the recipe plus the raw `(G_L, H_L)` pair as a key-value text
/// document. Deterministic and diff-stable.
pub fn instance_to_text(inst: &CodeInstance) -> String {
    let p = &inst.params;
    let exps: Vec<String> = p.exponents.iter().map(|e| e.to_string()).collect();
    let mut out = String::new();
    out.push_str(&format!("q {}\n", p.q));
    out.push_str(&format!("L {}\n", p.l));
    out.push_str(&format!("k {}\n", p.k));
    out.push_str(&format!("n {}\n", p.n));
    out.push_str(&format!("exponents {}\n", exps.join(",")));
    out.push_str(&format!("variant {}\n", p.variant));
    out.push_str(&format!("pq {}\n", p.pq));
    out.push_str("P\n");
    out.push_str(&inst.g.to_text());
    out.push_str("Q\n");
    out.push_str(&inst.h.to_text());
    out
}

/// Rebuilds an instance from its text form. For `pq a`/`pq b` the pair is
/// reconstructed and checked against the stored matrices.
pub fn instance_from_text(s: &str) -> Result<CodeInstance, CircError> {
    let mut q = None;
    let mut l = None;
    let mut k = None;
    let mut n = None;
    let mut exponents: Option<Vec<usize>> = None;
    let mut variant = None;
    let mut pq_kind: Option<String> = None;
    let mut lines = s.lines().peekable();
    let mut mats: Vec<(String, String)> = Vec::new();
    while let Some(line) = lines.next() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = match line.split_once(' ') {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match key {
            "q" => q = Some(parse_num(rest)?),
            "L" => l = Some(parse_num(rest)? as usize),
            "k" => k = Some(parse_num(rest)? as usize),
            "n" => n = Some(parse_num(rest)? as usize),
            "exponents" => {
                let list: Result<Vec<usize>, _> = rest
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect();
                exponents = Some(list.map_err(|_| CircError::Parse(rest.to_string()))?);
            }
            "variant" => variant = Some(Variant::parse(rest)?),
            "pq" => pq_kind = Some(rest.to_string()),
            "P" | "Q" => {
                let mut block = String::new();
                // matrix text: header plus `rows` lines
                let header = lines
                    .next()
                    .ok_or_else(|| CircError::Parse("truncated matrix".into()))?;
                block.push_str(header);
                block.push('\n');
                let rows: usize = header
                    .split_whitespace()
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| CircError::Parse("bad matrix header".into()))?;
                for _ in 0..rows {
                    let row = lines
                        .next()
                        .ok_or_else(|| CircError::Parse("truncated matrix".into()))?;
                    block.push_str(row);
                    block.push('\n');
                }
                mats.push((key.to_string(), block));
            }
            other => return Err(CircError::Parse(format!("unknown key `{other}`"))),
        }
    }
    let q = q.ok_or_else(|| CircError::Parse("missing q".into()))?;
    let l = l.ok_or_else(|| CircError::Parse("missing L".into()))?;
    let k = k.ok_or_else(|| CircError::Parse("missing k".into()))?;
    let n = n.ok_or_else(|| CircError::Parse("missing n".into()))?;
    let exponents = exponents.ok_or_else(|| CircError::Parse("missing exponents".into()))?;
    let variant = variant.ok_or_else(|| CircError::Parse("missing variant".into()))?;
    let pq_kind = pq_kind.ok_or_else(|| CircError::Parse("missing pq".into()))?;
    let find_mat = |name: &str| -> Result<MatFq, CircError> {
        let block = mats
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, b)| b.clone())
            .ok_or_else(|| CircError::Parse(format!("missing matrix {name}")))?;
        MatFq::parse_text(&block).map_err(|e| CircError::Parse(e.to_string()))
    };
    let stored_p = find_mat("P")?;
    let stored_q = find_mat("Q")?;
    let pq = match pq_kind.as_str() {
        "a" => PqChoice::InstanceA,
        "b" => PqChoice::InstanceB,
        "user" => PqChoice::User {
            p: stored_p.clone(),
            q: stored_q.clone(),
        },
        other => return Err(CircError::Parse(format!("unknown pq choice `{other}`"))),
    };
    let params = CircCodeParams::new(q, l, k, n, exponents, variant, pq)?;
    let inst = build_pq(params)?;
    if inst.g != stored_p || inst.h != stored_q {
        return Err(CircError::Parse(
            "stored P/Q do not match the reconstructed pair".into(),
        ));
    }
    Ok(inst)
}

fn parse_num(s: &str) -> Result<u64, CircError> {
    s.parse().map_err(|_| CircError::Parse(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(
        q: u64,
        l: usize,
        k: usize,
        n: usize,
        exps: &[usize],
        variant: Variant,
        pq: PqChoice,
    ) -> CircCodeParams {
        CircCodeParams::new(q, l, k, n, exps.to_vec(), variant, pq).unwrap()
    }

    fn example2_pair() -> PqChoice {
        // G_7 = [I_6 1], H_7 = [I_6 0]^T
        let g = MatFq::identity(6, 2).hstack(&MatFq::ones(6, 1, 2));
        let h = MatFq::identity(6, 2)
            .hstack(&MatFq::zeros(6, 1, 2))
            .transpose();
        PqChoice::User { p: g, q: h }
    }

    #[test]
    fn coprime_sets_golden() {
        assert_eq!(coprime_set(7), (vec![1, 2, 3, 4, 5, 6], 6));
        assert_eq!(coprime_set(9), (vec![1, 2, 4, 5, 7, 8], 6));
        assert_eq!(coprime_set(2), (vec![1], 1));
        assert_eq!(coprime_set(15), (vec![1, 2, 4, 7, 8, 11, 13, 14], 8));
    }

    #[test]
    fn instance_a_golden_l9() {
        let inst = build_pq(params(2, 9, 1, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        // G_9 = [I_6 0], H_9 = [I_6 A]^T with A = [I_3 I_3]^T
        let expect_g = MatFq::identity(6, 2).hstack(&MatFq::zeros(6, 3, 2));
        assert_eq!(inst.g_matrix(), &expect_g);
        let a = MatFq::identity(3, 2).vstack(&MatFq::identity(3, 2));
        let expect_h = MatFq::identity(6, 2).hstack(&a).transpose();
        assert_eq!(inst.h_matrix(), &expect_h);
    }

    #[test]
    fn instance_b_golden_l9() {
        let inst = build_pq(params(2, 9, 1, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceB))
            .unwrap();
        let a = MatFq::identity(3, 2).vstack(&MatFq::identity(3, 2));
        let expect_g = a.hstack(&MatFq::identity(6, 2));
        assert_eq!(inst.g_matrix(), &expect_g);
        let expect_h = MatFq::zeros(6, 3, 2).hstack(&MatFq::identity(6, 2)).transpose();
        assert_eq!(inst.h_matrix(), &expect_h);
    }

    #[test]
    fn instance_a_golden_l5() {
        let inst = build_pq(params(2, 5, 1, 4, &[0, 1, 2, 3], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        let expect_g = MatFq::identity(4, 2).hstack(&MatFq::zeros(4, 1, 2));
        let expect_h = MatFq::identity(4, 2).hstack(&MatFq::ones(4, 1, 2)).transpose();
        assert_eq!(inst.g_matrix(), &expect_g);
        assert_eq!(inst.h_matrix(), &expect_h);
    }

    #[test]
    fn n_larger_than_m_l_is_rejected() {
        let err = CircCodeParams::new(
            2,
            9,
            1,
            7,
            vec![0, 1, 2, 3, 4, 5, 6],
            Variant::C1,
            PqChoice::InstanceA,
        )
        .unwrap_err();
        assert!(matches!(err, CircError::PreconditionViolated(_)));
    }

    #[test]
    fn psi_block_golden_example2() {
        let p = params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceA);
        let psi = psi_block(&p);
        let expect = cyclic_shift_matrix(7, 0, 2)
            .hstack(&cyclic_shift_matrix(7, 1, 2))
            .hstack(&cyclic_shift_matrix(7, 2, 2));
        assert_eq!(psi, expect);
        // k=1, n=1, l=(0) gives the identity
        let p = params(2, 7, 1, 1, &[0], Variant::C1, PqChoice::InstanceA);
        assert!(psi_block(&p).is_identity());
        // q=2, k=2, L=5: second block row is C^(2 l_i)
        let p = params(2, 5, 2, 2, &[0, 1], Variant::C1, PqChoice::InstanceA);
        let psi = psi_block(&p);
        let bottom = psi.submatrix(5..10, 5..10);
        assert_eq!(bottom, cyclic_shift_matrix(5, 2, 2));
    }

    #[test]
    fn example2_generators_bit_exact() {
        let inst = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, example2_pair()))
            .unwrap();
        // message [0,0,0,0,0,1] -> first generator of the table
        let m = message_from_digits("000001", 2, 6).unwrap();
        let w = inst.encode(&m, EncodePath::Generic).unwrap();
        let expect = MatFq::from_rows(
            2,
            &[
                vec![0, 1, 1],
                vec![0, 0, 1],
                vec![0, 0, 0],
                vec![0, 0, 0],
                vec![0, 0, 0],
                vec![1, 0, 0],
            ],
        );
        assert_eq!(w.matrix, expect);
        // zero message -> zero codeword
        let z = inst.encode(&vec![0; 6], EncodePath::Fast).unwrap();
        assert!(z.matrix.is_zero());
    }

    #[test]
    fn example3_generator_bit_exact() {
        let inst = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C2, PqChoice::InstanceA))
            .unwrap();
        let m = message_from_digits("100000", 2, 6).unwrap();
        let w = inst.encode(&m, EncodePath::Generic).unwrap();
        let expect = MatFq::from_rows(
            2,
            &[
                vec![1, 0, 0],
                vec![1, 1, 0],
                vec![0, 1, 1],
                vec![0, 0, 1],
                vec![0, 0, 0],
                vec![0, 0, 0],
            ],
        );
        assert_eq!(w.matrix, expect);
    }

    #[test]
    fn fast_and_generic_paths_agree() {
        for (q, l, k, n, variant, pq) in [
            (2u64, 7usize, 1usize, 3usize, Variant::C1, example2_pair()),
            (2, 7, 1, 3, Variant::C2, PqChoice::InstanceA),
            (2, 7, 2, 3, Variant::C1, PqChoice::InstanceA),
            (2, 5, 3, 4, Variant::C2, PqChoice::InstanceA),
            (2, 9, 2, 4, Variant::C1, PqChoice::InstanceB),
            (3, 5, 2, 3, Variant::C1, PqChoice::InstanceA),
            (3, 5, 2, 3, Variant::C2, PqChoice::InstanceB),
        ] {
            let exps: Vec<usize> = (0..n).collect();
            let inst = build_pq(params(q, l, k, n, &exps, variant, pq)).unwrap();
            let d = inst.message_len();
            let mut state = 0x5a5a5a5au64;
            for trial in 0..20 {
                let m: Vec<Fq> = (0..d)
                    .map(|_| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(trial);
                        ((state >> 32) % q) as Fq
                    })
                    .collect();
                let a = inst.encode(&m, EncodePath::Generic).unwrap();
                let b = inst.encode(&m, EncodePath::Fast).unwrap();
                assert_eq!(a.matrix, b.matrix, "q={q} L={l} k={k} n={n} {variant}");
            }
        }
    }

    #[test]
    fn encode_is_linear() {
        let inst = build_pq(params(2, 7, 2, 3, &[0, 1, 2], Variant::C2, PqChoice::InstanceA))
            .unwrap();
        let d = inst.message_len();
        let mut state = 7u64;
        let mut rand_m = || -> Vec<Fq> {
            (0..d)
                .map(|_| {
                    state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                    ((state >> 33) & 1) as Fq
                })
                .collect()
        };
        for _ in 0..10 {
            let m1 = rand_m();
            let m2 = rand_m();
            let sum: Vec<Fq> = m1.iter().zip(&m2).map(|(&a, &b)| (a + b) % 2).collect();
            let w1 = inst.encode(&m1, EncodePath::Fast).unwrap().matrix;
            let w2 = inst.encode(&m2, EncodePath::Fast).unwrap().matrix;
            let ws = inst.encode(&sum, EncodePath::Fast).unwrap().matrix;
            assert_eq!(w1.add(&w2), ws);
        }
    }

    #[test]
    fn validate_pq_passes_for_good_instances() {
        for (q, l, k, n, variant, pq) in [
            (2u64, 7usize, 1usize, 3usize, Variant::C1, example2_pair()),
            (2, 7, 1, 3, Variant::C2, PqChoice::InstanceA),
            (2, 9, 2, 4, Variant::C1, PqChoice::InstanceB),
            (3, 5, 1, 2, Variant::C1, PqChoice::InstanceA),
        ] {
            let exps: Vec<usize> = (0..n).collect();
            let inst = build_pq(params(q, l, k, n, &exps, variant, pq)).unwrap();
            let report = validate_pq(&inst);
            assert!(report.all_passed(), "{:?}", report.failures);
        }
        // shifted exponent window l_j = j + c is also valid
        let inst = build_pq(params(2, 7, 1, 3, &[3, 4, 5], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        assert!(validate_pq(&inst).rank_condition);
    }

    #[test]
    fn validate_pq_catches_repeated_exponents() {
        let inst = build_pq(params(2, 7, 1, 3, &[1, 1, 2], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        let report = validate_pq(&inst);
        assert!(!report.rank_condition);
        assert!(!report.all_passed());
    }

    #[test]
    fn bad_user_pair_is_rejected() {
        // a pair that is not certified by any U/U'
        let g = MatFq::identity(6, 2).hstack(&MatFq::zeros(6, 1, 2));
        let mut h = MatFq::identity(6, 2)
            .hstack(&MatFq::zeros(6, 1, 2))
            .transpose();
        h[(6, 0)] = 1; // break the structure
        let err = build_pq(params(
            2,
            7,
            1,
            3,
            &[0, 1, 2],
            Variant::C1,
            PqChoice::User { p: g, q: h },
        ))
        .unwrap_err();
        assert!(matches!(err, CircError::PreconditionViolated(_)));
    }

    #[test]
    fn mrd_verified_for_example2() {
        let inst = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, example2_pair()))
            .unwrap();
        let report = inst.verify_mrd(1 << 20).unwrap();
        assert_eq!(report.min_rank, 3);
        assert!(report.is_mrd);
        // k = n is trivially MRD with min rank 1
        let inst = build_pq(params(2, 7, 3, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        let report = inst.verify_mrd(1 << 20).unwrap();
        assert_eq!(report.min_rank, 1);
        assert!(report.is_mrd);
    }

    #[test]
    fn enumeration_cap_respected() {
        let inst = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        assert!(matches!(
            inst.verify_mrd(8),
            Err(CircError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn t_matrix_golden_l5() {
        // the pair G_5 = [I_4 1], H_5 = [I_4 0]^T pins T bit-exactly
        let g = MatFq::identity(4, 2).hstack(&MatFq::ones(4, 1, 2));
        let h = MatFq::identity(4, 2)
            .hstack(&MatFq::zeros(4, 1, 2))
            .transpose();
        let inst = build_pq(params(
            2,
            5,
            1,
            4,
            &[0, 1, 2, 3],
            Variant::C1,
            PqChoice::User { p: g, q: h },
        ))
        .unwrap();
        let expect = MatFq::from_rows(
            2,
            &[
                vec![1, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 1],
            ],
        );
        assert_eq!(inst.t_matrix(), &expect);
        assert_eq!(inst.t_matrix().rank(), 4);
    }

    #[test]
    fn identity_h_pair_reproduces_the_paper_pairs() {
        let (g7, h7) = identity_h_pair(2, 7).unwrap();
        assert_eq!(g7, MatFq::identity(6, 2).hstack(&MatFq::ones(6, 1, 2)));
        assert_eq!(
            h7,
            MatFq::identity(6, 2).hstack(&MatFq::zeros(6, 1, 2)).transpose()
        );
        let (g5, h5) = identity_h_pair(2, 5).unwrap();
        assert_eq!(g5, MatFq::identity(4, 2).hstack(&MatFq::ones(4, 1, 2)));
        assert_eq!(
            h5,
            MatFq::identity(4, 2).hstack(&MatFq::zeros(4, 1, 2)).transpose()
        );
    }

    #[test]
    fn u1_column_golden_l5() {
        let (g, h) = identity_h_pair(2, 5).unwrap();
        let inst = build_pq(params(
            2,
            5,
            1,
            4,
            &[0, 1, 2, 3],
            Variant::C1,
            PqChoice::User { p: g, q: h },
        ))
        .unwrap();
        let fs = inst.field();
        let a = fs.generator().clone();
        let expect: Vec<FieldElement> =
            vec![fs.pow(&a, 11), fs.pow(&a, 10), fs.pow(&a, 4), fs.pow(&a, 8)];
        assert_eq!(inst.u_column(1), expect);
    }

    #[test]
    fn c2_equals_t_times_c1_per_message() {
        for (q, l, k, n, pq) in [
            (2u64, 7usize, 1usize, 3usize, PqChoice::InstanceA),
            (2, 5, 2, 3, PqChoice::InstanceA),
            (3, 5, 1, 2, PqChoice::InstanceB),
        ] {
            let exps: Vec<usize> = (0..n).collect();
            let c1 = build_pq(params(q, l, k, n, &exps, Variant::C1, pq.clone())).unwrap();
            let c2 = build_pq(params(q, l, k, n, &exps, Variant::C2, pq)).unwrap();
            let d = c1.message_len();
            let mut state = 99u64;
            for _ in 0..12 {
                let m: Vec<Fq> = (0..d)
                    .map(|_| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(12345);
                        ((state >> 40) % q) as Fq
                    })
                    .collect();
                let w1 = c1.encode(&m, EncodePath::Fast).unwrap().matrix;
                let w2 = c2.encode(&m, EncodePath::Fast).unwrap().matrix;
                assert_eq!(c1.t_matrix().mul(&w1), w2);
            }
        }
    }

    #[test]
    fn matrix_form_encode_matches_encoder() {
        for (q, l, k, n, variant, pq) in [
            (2u64, 7usize, 1usize, 3usize, Variant::C1, example2_pair()),
            (2, 7, 2, 3, Variant::C2, PqChoice::InstanceA),
            (2, 5, 1, 4, Variant::C1, PqChoice::InstanceA),
            (3, 5, 1, 2, Variant::C2, PqChoice::InstanceB),
        ] {
            let exps: Vec<usize> = (0..n).collect();
            let inst = build_pq(params(q, l, k, n, &exps, variant, pq)).unwrap();
            let d = inst.message_len();
            let mut state = 4242u64;
            for _ in 0..15 {
                let m: Vec<Fq> = (0..d)
                    .map(|_| {
                        state = state.wrapping_mul(2862933555777941757).wrapping_add(1);
                        ((state >> 35) % q) as Fq
                    })
                    .collect();
                let via_encode = inst.encode(&m, EncodePath::Generic).unwrap().matrix;
                let via_matrix_form = inst.matrix_form_encode(&m).unwrap().matrix;
                assert_eq!(via_encode, via_matrix_form, "q={q} L={l} k={k} {variant}");
            }
        }
    }

    #[test]
    fn generalized_view_example5() {
        // C1 with H = [I 0]^T at L = 7: cosets {1,2,4} and {3,5,6}
        let inst = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, example2_pair()))
            .unwrap();
        let gen = generalized_gabidulin(&inst).unwrap();
        assert_eq!(gen.epsilons(), &[1, 3]);
        let fs = inst.field();
        let b = inst.beta().clone();
        // B_(1,1) = [1, b^6, b^12] and F_2 = {1, b^3, b^6}
        let expect: Vec<FieldElement> =
            vec![fs.one(), fs.pow(&b, 6), fs.pow(&b, 12)];
        assert_eq!(gen.basis(0, 0), &expect[..]);
        let expect_f: Vec<FieldElement> = vec![fs.one(), fs.pow(&b, 3), fs.pow(&b, 6)];
        assert_eq!(gen.eval_set(1), &expect_f[..]);
        // per-message agreement with the parent encoder
        let d = inst.message_len();
        for idx in 0..(1u64 << d) {
            let m: Vec<Fq> = (0..d).map(|i| ((idx >> (d - 1 - i)) & 1) as Fq).collect();
            let lhs = inst.encode(&m, EncodePath::Fast).unwrap().matrix;
            assert_eq!(gen.codeword_for_message(&m), lhs, "m={m:?}");
        }
        // wrong shape is refused
        let bad = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        assert!(matches!(
            generalized_gabidulin(&bad),
            Err(CircError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn generalized_collapses_to_single_gabidulin_when_j_is_m_l() {
        // L = 5: J = m_L = 4, a single coset
        let (g, h) = identity_h_pair(2, 5).unwrap();
        let inst = build_pq(params(
            2,
            5,
            1,
            4,
            &[0, 1, 2, 3],
            Variant::C1,
            PqChoice::User { p: g, q: h },
        ))
        .unwrap();
        let gen = generalized_gabidulin(&inst).unwrap();
        assert_eq!(gen.epsilons(), &[1]);
        let book = gen.codebook(1 << 20).unwrap();
        let parent = inst.codebook(1 << 20).unwrap();
        assert!(code_set_equal(&book, &parent));
    }

    #[test]
    fn coincidence_l5_is_a_gabidulin_code() {
        let (g, h) = identity_h_pair(2, 5).unwrap();
        let inst = build_pq(params(
            2,
            5,
            1,
            4,
            &[0, 1, 2, 3],
            Variant::C1,
            PqChoice::User { p: g, q: h },
        ))
        .unwrap();
        match gabidulin_coincidence(&inst, 1 << 20).unwrap() {
            CoincidenceVerdict::Coincides { basis } => {
                assert_eq!(basis, inst.u_column(1));
            }
            other => panic!("expected coincidence, got {other:?}"),
        }
    }

    #[test]
    fn coincidence_differs_for_l7_arithmetic_exponents() {
        // J = 6 != m_L = 3; k = 1 < n = 3; l_j = j; sum = c' = 1, coprime
        let inst = build_pq(params(2, 7, 1, 3, &[0, 1, 2], Variant::C1, PqChoice::InstanceA))
            .unwrap();
        match gabidulin_coincidence(&inst, 1 << 20).unwrap() {
            CoincidenceVerdict::Differs { exponent, witness } => {
                assert_eq!(exponent, 1);
                assert!(!crate::field::is_irreducible(&witness, 2));
            }
            other => panic!("expected difference, got {other:?}"),
        }
    }

    #[test]
    fn coincidence_undetermined_cases() {
        // L = 15, k = 2: sum = 3 c' is never coprime to 15
        let inst = build_pq(params(
            2,
            15,
            2,
            3,
            &[0, 1, 2],
            Variant::C1,
            PqChoice::InstanceA,
        ))
        .unwrap();
        assert!(matches!(
            gabidulin_coincidence(&inst, 1 << 24).unwrap(),
            CoincidenceVerdict::Undetermined { .. }
        ));
        // non-arithmetic exponents
        let inst = build_pq(params(
            2,
            15,
            2,
            3,
            &[0, 1, 3],
            Variant::C1,
            PqChoice::InstanceA,
        ))
        .unwrap();
        assert!(matches!(
            gabidulin_coincidence(&inst, 1 << 24).unwrap(),
            CoincidenceVerdict::Undetermined { .. }
        ));
    }

    #[test]
    fn instance_text_roundtrip() {
        for pq in [PqChoice::InstanceA, PqChoice::InstanceB, example2_pair()] {
            let l = 7;
            let inst = build_pq(params(2, l, 1, 3, &[0, 1, 2], Variant::C2, pq)).unwrap();
            let text = instance_to_text(&inst);
            let back = instance_from_text(&text).unwrap();
            assert_eq!(back.params(), inst.params());
            assert_eq!(back.g_matrix(), inst.g_matrix());
            assert_eq!(back.h_matrix(), inst.h_matrix());
            assert_eq!(instance_to_text(&back), text);
        }
    }
}
