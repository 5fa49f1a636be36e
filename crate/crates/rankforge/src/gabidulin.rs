//! Classical Gabidulin codes, in both representations.
//!
//! The matrix representation builds codewords `M(u) = M_o(B) L_u` directly
//! as `N x n` matrices over `F_q`; the vector representation evaluates the
//! q-linearized polynomial `L_u` at independent points and maps the result
//! through a counterpart matrix with respect to a basis. The two views agree
//! once the dual basis enters the picture, and `check_prop1` verifies that
//! set equality by full enumeration.

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec, Fq};
use crate::linalg::{element_matrix, m_o, LinalgError, MatFq, MatFqm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GabidulinError {
    #[error("the given elements do not form a basis")]
    NotABasis,
    #[error("evaluation points are F_q-linearly dependent")]
    DependentBetas,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("enumeration of {needed} messages exceeds the cap {cap}")]
    EnumerationTooLarge { needed: u128, cap: u128 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Default limit on codebook enumerations (number of messages).
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

/// An ordered basis of `F_{q^N}` over `F_q`, kept as a row of N independent
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    elements: Vec<FieldElement>,
}

impl Basis {
    pub fn new(fs: &FieldSpec, elements: Vec<FieldElement>) -> Result<Basis, GabidulinError> {
        if elements.len() != fs.degree() {
            return Err(GabidulinError::NotABasis);
        }
        let b = Basis { elements };
        if b.coordinate_matrix(fs).rank() != fs.degree() {
            return Err(GabidulinError::NotABasis);
        }
        Ok(b)
    }

    /// The polynomial basis `[1, a, a^2, ...]` on the field generator.
    pub fn polynomial(fs: &FieldSpec) -> Basis {
        let elements = (0..fs.degree())
            .map(|i| fs.pow(fs.generator(), i as u128))
            .collect();
        Basis { elements }
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    /// Row r holds the coefficient vector of the r-th basis element.
    pub fn coordinate_matrix(&self, fs: &FieldSpec) -> MatFq {
        let n = fs.degree();
        MatFq::from_fn(n, n, fs.q(), |r, c| self.elements[r].coeffs()[c])
    }
}

/// The unique dual basis `B'` with `M_o(B)^T M_o(B') = I_N`, equivalently
/// `Tr(w_i w'_j) = [i = j]`. Solved as N linear systems over `F_q`.
pub fn dual_basis(fs: &FieldSpec, b: &Basis) -> Result<Basis, GabidulinError> {
    let n = fs.degree();
    let q = fs.q();
    // A[i][c] = Tr(w_i * x^c): coordinates of the trace form
    let a = MatFq::from_fn(n, n, q, |i, c| {
        let xc = monomial_element(fs, c);
        fs.trace(&fs.mul(&b.elements[i], &xc))
    });
    let a_inv = a.inverse().map_err(|_| GabidulinError::NotABasis)?;
    let mut duals = Vec::with_capacity(n);
    for j in 0..n {
        // solve A y = e_j; column j of the inverse
        let mut coeffs = vec![0; n];
        for c in 0..n {
            coeffs[c] = a_inv[(c, j)];
        }
        duals.push(fs.from_coeffs(&coeffs));
    }
    let dual = Basis::new(fs, duals)?;
    debug_assert!({
        let lhs = m_o(fs, b.elements()).transpose().mul(fs, &m_o(fs, dual.elements()));
        lhs.to_fq(fs).map(|m| m.is_identity()).unwrap_or(false)
    });
    Ok(dual)
}

/// The basis element `x^c` (polynomial basis monomial).
fn monomial_element(fs: &FieldSpec, c: usize) -> FieldElement {
    let mut coeffs = vec![0; fs.degree()];
    coeffs[c] = 1;
    fs.from_coeffs(&coeffs)
}

/// The counterpart matrix of a row vector with respect to a basis: column i
/// holds the coordinates of `v[i]`, so that `B M_B(v) = v`.
pub fn counterpart_matrix(
    fs: &FieldSpec,
    v: &[FieldElement],
    b: &Basis,
) -> Result<MatFq, GabidulinError> {
    let k_inv = b
        .coordinate_matrix(fs)
        .inverse()
        .map_err(|_| GabidulinError::NotABasis)?;
    let n = fs.degree();
    let mut out = MatFq::zeros(n, v.len(), fs.q());
    for (i, vi) in v.iter().enumerate() {
        let coords = k_inv.vec_mul(vi.coeffs());
        for r in 0..n {
            out[(r, i)] = coords[r];
        }
    }
    Ok(out)
}

/// Reconstructs `v = B M` from a counterpart matrix.
pub fn reconstruct_from_counterpart(fs: &FieldSpec, b: &Basis, m: &MatFq) -> Vec<FieldElement> {
    (0..m.cols())
        .map(|i| {
            let mut acc = fs.zero();
            for (r, w) in b.elements().iter().enumerate() {
                acc = fs.add(&acc, &fs.scalar_mul(m[(r, i)], w));
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------------
// q-linearized polynomials
// ---------------------------------------------------------------------------

/// `L_u(x) = sum_s u_s x^(q^s)`, optionally with the h = 0 twist term
/// `eta * u_0 * x^(q^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QLinPoly {
    coeffs: Vec<FieldElement>,
    twist: Option<FieldElement>,
}

impl QLinPoly {
    pub fn new(coeffs: Vec<FieldElement>) -> QLinPoly {
        assert!(!coeffs.is_empty(), "a q-linearized polynomial needs k >= 1");
        QLinPoly { coeffs, twist: None }
    }

    /// Twisted variant with h = 0: adds `eta * u_0 * x^(q^k)`.
    pub fn with_twist(coeffs: Vec<FieldElement>, eta: FieldElement) -> QLinPoly {
        assert!(!coeffs.is_empty(), "a q-linearized polynomial needs k >= 1");
        QLinPoly {
            coeffs,
            twist: Some(eta),
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn eval(&self, fs: &FieldSpec, x: &FieldElement) -> FieldElement {
        let mut acc = fs.zero();
        let mut xq = x.clone();
        for u in &self.coeffs {
            acc = fs.add(&acc, &fs.mul(u, &xq));
            xq = fs.frobenius(&xq, 1);
        }
        if let Some(eta) = &self.twist {
            // xq now holds x^(q^k)
            let term = fs.mul(&fs.mul(eta, &self.coeffs[0]), &xq);
            acc = fs.add(&acc, &term);
        }
        acc
    }
}

/// Gate for the twisted construction with h = 0: eta must satisfy
/// `eta^((q^N-1)/(q-1)) != (-1)^(nk)`. Always true for eta = 0 (the code
/// degenerates to Gabidulin), never true for q = 2 and eta != 0.
pub fn twisted_generator_validate(fs: &FieldSpec, n: usize, k: usize, eta: &FieldElement) -> bool {
    if eta.is_zero() {
        return true;
    }
    let e = (fs.size() - 1) / (fs.q() as u128 - 1);
    let lhs = fs.pow(eta, e);
    let rhs = if (n * k) % 2 == 0 {
        fs.one()
    } else {
        fs.neg(&fs.one())
    };
    lhs != rhs
}

// ---------------------------------------------------------------------------
// Gabidulin codes
// ---------------------------------------------------------------------------

/// Everything needed to realize one Gabidulin code: the field, n independent
/// evaluation points, the dimension k, and the basis used for the matrix
/// embedding.
#[derive(Debug, Clone)]
pub struct GabidulinParams {
    pub field: FieldSpec,
    pub betas: Vec<FieldElement>,
    pub k: usize,
    pub basis: Basis,
}

impl GabidulinParams {
    pub fn new(
        field: FieldSpec,
        betas: Vec<FieldElement>,
        k: usize,
        basis: Basis,
    ) -> Result<GabidulinParams, GabidulinError> {
        let n = betas.len();
        let big_n = field.degree();
        if k == 0 || k > n || n > big_n {
            return Err(GabidulinError::DimMismatch(format!(
                "need 1 <= k <= n <= N, got k={k} n={n} N={big_n}"
            )));
        }
        let coord = MatFq::from_fn(n, big_n, field.q(), |r, c| betas[r].coeffs()[c]);
        if coord.rank() != n {
            return Err(GabidulinError::DependentBetas);
        }
        Ok(GabidulinParams {
            field,
            betas,
            k,
            basis,
        })
    }

    pub fn n(&self) -> usize {
        self.betas.len()
    }

    /// The k x n generator matrix: row i is the entrywise q^i-power of the
    /// evaluation points.
    pub fn generator_matrix(&self) -> MatFqm {
        let fs = &self.field;
        MatFqm::from_fn(fs, self.k, self.n(), |i, t| fs.frobenius(&self.betas[t], i))
    }

    /// Vector-representation encoding: `u G`, i.e. the evaluations
    /// `L_u(beta_t)`.
    pub fn encode_vector(&self, u: &[FieldElement]) -> Result<Vec<FieldElement>, GabidulinError> {
        if u.len() != self.k {
            return Err(GabidulinError::DimMismatch(format!(
                "message length {} != k = {}",
                u.len(),
                self.k
            )));
        }
        let poly = QLinPoly::new(u.to_vec());
        Ok(self
            .betas
            .iter()
            .map(|b| poly.eval(&self.field, b))
            .collect())
    }

    /// Matrix-representation encoding: `M(u) = M_o(B) L_u`, an `N x n`
    /// matrix over `F_q`.
    pub fn encode_matrix(&self, u: &[FieldElement]) -> Result<MatFq, GabidulinError> {
        let fs = &self.field;
        let evals = self.encode_vector(u)?;
        let big_n = fs.degree();
        let l_u = MatFqm::from_fn(fs, big_n, self.n(), |i, t| fs.frobenius(&evals[t], i));
        let m = m_o(fs, self.basis.elements()).mul(fs, &l_u);
        Ok(m.to_fq(fs)?)
    }

    /// Counterpart-matrix encoding of the vector codeword with respect to
    /// `basis`.
    pub fn encode_counterpart(
        &self,
        u: &[FieldElement],
        basis: &Basis,
    ) -> Result<MatFq, GabidulinError> {
        let v = self.encode_vector(u)?;
        counterpart_matrix(&self.field, &v, basis)
    }

    /// Message basis over `F_q`: units `x^c e_s` in message-lex order
    /// (s major, then coefficient index).
    fn message_basis(&self) -> Vec<Vec<FieldElement>> {
        let fs = &self.field;
        let big_n = fs.degree();
        let mut out = Vec::with_capacity(self.k * big_n);
        for s in 0..self.k {
            for c in 0..big_n {
                let mut u = vec![fs.zero(); self.k];
                u[s] = monomial_element(fs, c);
                out.push(u);
            }
        }
        out
    }

    fn check_cap(&self, cap: u128) -> Result<(), GabidulinError> {
        let needed = self
            .field
            .size()
            .checked_pow(self.k as u32)
            .unwrap_or(u128::MAX);
        if needed > cap {
            return Err(GabidulinError::EnumerationTooLarge { needed, cap });
        }
        Ok(())
    }

    /// The full matrix-representation codebook `{M(u)}` (q^(Nk) matrices).
    pub fn codebook_matrix(&self, cap: u128) -> Result<Vec<MatFq>, GabidulinError> {
        self.check_cap(cap)?;
        let words: Result<Vec<MatFq>, _> = self
            .message_basis()
            .iter()
            .map(|u| self.encode_matrix(u))
            .collect();
        Ok(span_codebook(self.field.q(), &words?))
    }

    /// The full counterpart codebook `{M_B'(u G)}` for a chosen basis.
    pub fn codebook_counterpart(
        &self,
        basis: &Basis,
        cap: u128,
    ) -> Result<Vec<MatFq>, GabidulinError> {
        self.check_cap(cap)?;
        let words: Result<Vec<MatFq>, _> = self
            .message_basis()
            .iter()
            .map(|u| self.encode_counterpart(u, basis))
            .collect();
        Ok(span_codebook(self.field.q(), &words?))
    }

    /// The two representations describe the same set of matrices once the
    /// dual basis bridges them: `{M(u)} = {M_B'(u G)}`. Checked by full
    /// enumeration of both codebooks.
    pub fn check_prop1(&self, cap: u128) -> Result<bool, GabidulinError> {
        let dual = dual_basis(&self.field, &self.basis)?;
        let lhs = self.codebook_matrix(cap)?;
        let rhs = self.codebook_counterpart(&dual, cap)?;
        Ok(codebooks_equal(&lhs, &rhs))
    }
}

/// Codebook via the row-space characterization: codeword columns are
/// `(sum_s e_s X_t^(q^s))^T` with `X_t = V A(beta_t) V^{-1}`, `V` the
/// change-of-basis matrix onto the descending power basis of the modulus
/// root. Set-equal to the counterpart codebook for the same basis.
pub fn row_space_codebook(
    params: &GabidulinParams,
    basis: &Basis,
    cap: u128,
) -> Result<Vec<MatFq>, GabidulinError> {
    params.check_cap(cap)?;
    let fs = &params.field;
    let big_n = fs.degree();
    let q = fs.q();
    let v = change_of_basis_to_power(fs, basis);
    let v_inv = v.inverse().map_err(|_| GabidulinError::NotABasis)?;
    let x_mats: Vec<MatFq> = params
        .betas
        .iter()
        .map(|b| v.mul(&element_matrix(fs, b)).mul(&v_inv))
        .collect();
    // precompute X_t^(q^s)
    let mut powers: Vec<Vec<MatFq>> = Vec::with_capacity(params.k);
    for s in 0..params.k {
        let e = (q as u128).pow(s as u32);
        powers.push(x_mats.iter().map(|x| x.pow(e)).collect());
    }
    let mut words = Vec::new();
    for s in 0..params.k {
        for c in 0..big_n {
            let mut w = MatFq::zeros(big_n, params.n(), q);
            let mut e_row = vec![0; big_n];
            e_row[c] = 1;
            for (t, x) in powers[s].iter().enumerate() {
                let col = x.transpose().mul_vec(&e_row); // (e X)^T = X^T e^T
                for r in 0..big_n {
                    w[(r, t)] = col[r];
                }
            }
            words.push(w);
        }
    }
    Ok(span_codebook(q, &words))
}

/// `V` with `B^T = V B_gamma^T`, `B_gamma = [g^{N-1} ... g 1]`: row r holds
/// the coefficients of `B[r]` on descending powers of the modulus root.
pub fn change_of_basis_to_power(fs: &FieldSpec, basis: &Basis) -> MatFq {
    let n = fs.degree();
    MatFq::from_fn(n, n, fs.q(), |r, c| basis.elements()[r].coeffs()[n - 1 - c])
}

// ---------------------------------------------------------------------------
// Codebook helpers
// ---------------------------------------------------------------------------

/// Expands the `F_q`-span of basis codewords into the full codebook, one
/// matrix per message, by an odometer walk that adds a single basis word per
/// digit bump. Message index 0 is the zero codeword.
pub fn span_codebook(q: Fq, basis_words: &[MatFq]) -> Vec<MatFq> {
    let mut out = Vec::new();
    for_each_in_span(q, basis_words, |m| out.push(m.clone()));
    out
}

/// Visits every `F_q`-combination of the basis words exactly once, in
/// message-counting order (last digit least significant).
pub fn for_each_in_span(q: Fq, basis_words: &[MatFq], mut f: impl FnMut(&MatFq)) {
    let d = basis_words.len();
    assert!(d > 0, "empty basis");
    let total = (q as u128)
        .checked_pow(d as u32)
        .expect("span size overflows u128");
    let mut digits = vec![0u32; d];
    let mut acc = MatFq::zeros(basis_words[0].rows(), basis_words[0].cols(), q);
    f(&acc);
    for _ in 1..total {
        // odometer increment from the last digit; each bump (including the
        // wrap q-1 -> 0, which adds -(q-1) = +1 mod q) adds one basis word
        let mut pos = d;
        loop {
            pos -= 1;
            acc = acc.add(&basis_words[pos]);
            if digits[pos] + 1 < q {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 0;
        }
        f(&acc);
    }
}

/// Multiset equality of two codebooks under canonical serialization.
pub fn codebooks_equal(a: &[MatFq], b: &[MatFq]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut sa: Vec<Vec<u8>> = a.iter().map(serialize_word).collect();
    let mut sb: Vec<Vec<u8>> = b.iter().map(serialize_word).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    sa == sb
}

pub(crate) fn serialize_word(m: &MatFq) -> Vec<u8> {
    let mut out = Vec::with_capacity(m.data().len() + 8);
    out.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for &v in m.data() {
        debug_assert!(v < 256, "desk-scale codebooks assume q < 256");
        out.push(v as u8);
    }
    out
}

/// Minimum rank over the nonzero span of the given basis codewords.
pub fn min_rank_of_span(q: Fq, basis_words: &[MatFq]) -> usize {
    let mut min = usize::MAX;
    let mut first = true;
    for_each_in_span(q, basis_words, |m| {
        if first {
            first = false; // skip the zero codeword
            return;
        }
        let r = m.rank();
        if r < min {
            min = r;
        }
    });
    min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn f16() -> FieldSpec {
        FieldSpec::new(2, 4, None).unwrap()
    }

    fn example1_params() -> GabidulinParams {
        let fs = f16();
        let a = fs.generator().clone();
        let betas: Vec<FieldElement> = (1..=4).map(|e| fs.pow(&a, e)).collect();
        let basis = Basis::polynomial(&fs);
        GabidulinParams::new(fs, betas, 1, basis).unwrap()
    }

    #[test]
    fn dual_basis_golden_f16() {
        let fs = f16();
        let a = fs.generator().clone();
        let basis = Basis::polynomial(&fs);
        let dual = dual_basis(&fs, &basis).unwrap();
        let expect: Vec<FieldElement> = vec![
            fs.pow(&a, 14),
            fs.pow(&a, 2),
            fs.pow(&a, 1),
            fs.one(),
        ];
        assert_eq!(dual.elements(), &expect[..]);
    }

    #[test]
    fn dual_basis_is_an_involution() {
        let fs = f16();
        let basis = Basis::polynomial(&fs);
        let dual = dual_basis(&fs, &basis).unwrap();
        assert_eq!(dual_basis(&fs, &dual).unwrap(), basis);
    }

    #[test]
    fn dual_basis_product_identity_f8() {
        let fs = FieldSpec::new(2, 3, None).unwrap();
        // a non-polynomial basis
        let a = fs.generator().clone();
        let b = Basis::new(
            &fs,
            vec![fs.pow(&a, 3), fs.pow(&a, 5), fs.one()],
        )
        .unwrap();
        let d = dual_basis(&fs, &b).unwrap();
        let prod = m_o(&fs, b.elements()).mul(&fs, &m_o(&fs, d.elements()).transpose());
        assert!(prod.to_fq(&fs).unwrap().is_identity());
    }

    #[test]
    fn counterpart_of_basis_is_identity() {
        let fs = f16();
        let basis = Basis::polynomial(&fs);
        let m = counterpart_matrix(&fs, basis.elements(), &basis).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn counterpart_golden_example1() {
        // v = [a, a^2, a^3, a^4] w.r.t. the dual basis gives the second
        // codeword of the matrix-representation table
        let fs = f16();
        let a = fs.generator().clone();
        let basis = Basis::polynomial(&fs);
        let dual = dual_basis(&fs, &basis).unwrap();
        let v: Vec<FieldElement> = (1..=4).map(|e| fs.pow(&a, e)).collect();
        let m = counterpart_matrix(&fs, &v, &dual).unwrap();
        let expect = MatFq::from_rows(
            2,
            &[
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 1],
                vec![0, 0, 1, 1],
            ],
        );
        assert_eq!(m, expect);
    }

    #[test]
    fn counterpart_reconstructs() {
        let fs = f16();
        let a = fs.generator().clone();
        let basis = Basis::new(
            &fs,
            vec![fs.pow(&a, 7), fs.pow(&a, 2), fs.pow(&a, 5), fs.one()],
        )
        .unwrap();
        let v: Vec<FieldElement> = vec![fs.pow(&a, 5), fs.zero(), fs.pow(&a, 11)];
        let m = counterpart_matrix(&fs, &v, &basis).unwrap();
        assert_eq!(reconstruct_from_counterpart(&fs, &basis, &m), v);
    }

    #[test]
    fn qlin_eval_basics() {
        let fs = f16();
        let a = fs.generator().clone();
        let ident = QLinPoly::new(vec![fs.one()]);
        for x in fs.elements() {
            assert_eq!(ident.eval(&fs, &x), x);
        }
        // u = [a]: L_u(a) = a * a = a^2
        let p = QLinPoly::new(vec![a.clone()]);
        assert_eq!(p.eval(&fs, &a), fs.pow(&a, 2));
    }

    #[test]
    fn qlin_eval_is_additive_exhaustively() {
        let fs = f16();
        let a = fs.generator().clone();
        let p = QLinPoly::new(vec![fs.pow(&a, 3), fs.pow(&a, 7)]);
        let all: Vec<FieldElement> = fs.elements().collect();
        for x in &all {
            for y in &all {
                assert_eq!(
                    p.eval(&fs, &fs.add(x, y)),
                    fs.add(&p.eval(&fs, x), &p.eval(&fs, y))
                );
            }
        }
    }

    #[test]
    fn root_linear_combinations_stay_roots() {
        // if sum c_i L(b_i) = 0 with c_i in F_q then L(sum c_i b_i) = 0
        let fs = FieldSpec::new(2, 3, None).unwrap();
        let a = fs.generator().clone();
        let p = QLinPoly::new(vec![a.clone(), fs.pow(&a, 4)]);
        let all: Vec<FieldElement> = fs.elements().collect();
        for b0 in &all {
            for b1 in &all {
                let sum = fs.add(&p.eval(&fs, b0), &p.eval(&fs, b1));
                if sum.is_zero() {
                    assert!(p.eval(&fs, &fs.add(b0, b1)).is_zero());
                }
            }
        }
    }

    #[test]
    fn generator_matrix_rows_are_frobenius_steps() {
        let params = example1_params();
        let g = params.generator_matrix();
        assert_eq!((g.rows(), g.cols()), (1, 4));
        assert_eq!(g.column(0)[0], params.betas[0]);

        let fs = FieldSpec::new(2, 3, None).unwrap();
        let a = fs.generator().clone();
        let betas = vec![fs.one(), a.clone(), fs.pow(&a, 2)];
        let basis = Basis::polynomial(&fs);
        let p = GabidulinParams::new(fs.clone(), betas, 2, basis).unwrap();
        let g = p.generator_matrix();
        for t in 0..3 {
            assert_eq!(g[(1, t)], fs.frobenius(&g[(0, t)], 1));
        }
    }

    #[test]
    fn encode_vector_golden_example1() {
        let params = example1_params();
        let fs = &params.field;
        let a = fs.generator().clone();
        // u = a: codeword [a^2, a^3, a^4, a^5]
        let v = params.encode_vector(&[a.clone()]).unwrap();
        let expect: Vec<FieldElement> = (2..=5).map(|e| fs.pow(&a, e)).collect();
        assert_eq!(v, expect);
        // u = 0: zero codeword
        let z = params.encode_vector(&[fs.zero()]).unwrap();
        assert!(z.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn encode_matrix_golden_example1() {
        let params = example1_params();
        let fs = &params.field;
        let m = params.encode_matrix(&[fs.one()]).unwrap();
        let expect = MatFq::from_rows(
            2,
            &[
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 1],
                vec![0, 0, 1, 1],
            ],
        );
        assert_eq!(m, expect);
    }

    #[test]
    fn prop1_equivalence_example1_and_small_cases() {
        let params = example1_params();
        assert!(params.check_prop1(DEFAULT_ENUMERATION_CAP).unwrap());

        // random-ish basis and betas at q=2, N=3, k=1, n=2
        let fs = FieldSpec::new(2, 3, None).unwrap();
        let a = fs.generator().clone();
        let basis = Basis::new(&fs, vec![fs.pow(&a, 5), a.clone(), fs.pow(&a, 3)]).unwrap();
        let betas = vec![fs.pow(&a, 2), fs.pow(&a, 6)];
        let p = GabidulinParams::new(fs, betas, 1, basis).unwrap();
        assert!(p.check_prop1(DEFAULT_ENUMERATION_CAP).unwrap());

        // degenerate k = n = N = 2 over F_4
        let fs = FieldSpec::new(2, 2, None).unwrap();
        let a = fs.generator().clone();
        let basis = Basis::polynomial(&fs);
        let p = GabidulinParams::new(fs.clone(), vec![fs.one(), a], 2, basis).unwrap();
        assert!(p.check_prop1(DEFAULT_ENUMERATION_CAP).unwrap());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let params = example1_params();
        assert!(matches!(
            params.codebook_matrix(8),
            Err(GabidulinError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn row_space_codebook_matches_counterpart() {
        let params = example1_params();
        let fs = &params.field;
        let a = fs.generator().clone();
        for basis in [
            Basis::polynomial(fs),
            Basis::new(fs, vec![fs.pow(&a, 14), fs.pow(&a, 2), a.clone(), fs.one()]).unwrap(),
        ] {
            let lhs = row_space_codebook(&params, &basis, DEFAULT_ENUMERATION_CAP).unwrap();
            let rhs = params
                .codebook_counterpart(&basis, DEFAULT_ENUMERATION_CAP)
                .unwrap();
            assert!(codebooks_equal(&lhs, &rhs));
        }
    }

    #[test]
    fn min_rank_meets_singleton_equality() {
        // every nonzero codeword of a k <= n <= N Gabidulin code has rank
        // >= n-k+1, and the bound is attained
        for (q, big_n, k, n) in [(2u64, 4usize, 1usize, 4usize), (2, 4, 2, 3), (2, 3, 1, 2)] {
            let fs = FieldSpec::new(q, big_n, None).unwrap();
            let a = fs.generator().clone();
            let betas: Vec<FieldElement> = (0..n).map(|i| fs.pow(&a, i as u128)).collect();
            let basis = Basis::polynomial(&fs);
            let params = GabidulinParams::new(fs.clone(), betas, k, basis).unwrap();
            let words: Vec<MatFq> = params
                .message_basis()
                .iter()
                .map(|u| params.encode_matrix(u).unwrap())
                .collect();
            assert_eq!(min_rank_of_span(fs.q(), &words), n - k + 1);
        }
    }

    #[test]
    fn twisted_validation_matches_the_eta_condition() {
        let f16 = FieldSpec::new(2, 4, None).unwrap();
        assert!(twisted_generator_validate(&f16, 4, 1, &f16.zero()));
        // q = 2: every nonzero eta fails (eta^15 = 1 = (-1)^(nk))
        for x in f16.elements().skip(1) {
            assert!(!twisted_generator_validate(&f16, 4, 1, &x));
        }
        // q = 3, N = 2, n = 2, k = 1: eta = generator passes
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        let eta = f9.generator().clone();
        assert!(twisted_generator_validate(&f9, 2, 1, &eta));
        // exhaustive check against the raw condition
        for x in f9.elements() {
            let expect = x.is_zero() || {
                let lhs = f9.pow(&x, (f9.size() - 1) / 2);
                !f9.is_one(&lhs) // (-1)^(2*1) = 1
            };
            assert_eq!(twisted_generator_validate(&f9, 2, 1, &x), expect);
        }
    }

    #[test]
    fn twisted_eval_adds_the_qk_term() {
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        let eta = f9.generator().clone();
        let u0 = f9.pow(&eta, 3);
        let p = QLinPoly::with_twist(vec![u0.clone()], eta.clone());
        let x = f9.pow(&eta, 5);
        let plain = f9.mul(&u0, &x);
        let twist = f9.mul(&fs_mul3(&f9, &eta, &u0), &f9.frobenius(&x, 1));
        assert_eq!(p.eval(&f9, &x), f9.add(&plain, &twist));
    }

    fn fs_mul3(fs: &FieldSpec, a: &FieldElement, b: &FieldElement) -> FieldElement {
        fs.mul(a, b)
    }
}
