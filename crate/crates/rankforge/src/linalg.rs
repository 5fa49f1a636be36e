//! Dense matrices over `F_q` and `F_{q^m}`.
//!
//! Exact arithmetic only: rank and inverse run fraction-free Gaussian
//! elimination with modular inverses, Kronecker products build the block
//! encoders, and the circulant / Vandermonde / companion constructors feed
//! the code machinery. The text format (`"rows cols q"` header, one line per
//! row) round-trips bit-exactly.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::field::{fq_inverse, FieldElement, FieldSpec, Fq, Poly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("element does not have multiplicative order {0}")]
    WrongOrder(u64),
    #[error("matrix has entries outside the base field")]
    NotOverBaseField,
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Matrices over F_q
// ---------------------------------------------------------------------------

/// A dense row-major matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    q: Fq,
    data: Vec<Fq>,
}

impl Index<(usize, usize)> for MatFq {
    type Output = Fq;
    fn index(&self, (r, c): (usize, usize)) -> &Fq {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for MatFq {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Fq {
        &mut self.data[r * self.cols + c]
    }
}

impl MatFq {
    pub fn zeros(rows: usize, cols: usize, q: Fq) -> Self {
        MatFq {
            rows,
            cols,
            q,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, q: Fq) -> Self {
        let mut m = MatFq::zeros(n, n, q);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize, q: Fq) -> Self {
        MatFq {
            rows,
            cols,
            q,
            data: vec![1; rows * cols],
        }
    }

    pub fn from_rows(q: Fq, rows: &[Vec<Fq>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| v % q));
        }
        MatFq { rows: r, cols: c, q, data }
    }

    pub fn from_fn(rows: usize, cols: usize, q: Fq, mut f: impl FnMut(usize, usize) -> Fq) -> Self {
        let mut m = MatFq::zeros(rows, cols, q);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c) % q;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn q(&self) -> Fq {
        self.q
    }

    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Fq] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == MatFq::identity(self.rows, self.q)
    }

    pub fn add(&self, rhs: &MatFq) -> MatFq {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a + b) % self.q)
            .collect();
        MatFq { data, ..*self }
    }

    pub fn sub(&self, rhs: &MatFq) -> MatFq {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a + self.q - b) % self.q)
            .collect();
        MatFq { data, ..*self }
    }

    pub fn scalar_mul(&self, c: Fq) -> MatFq {
        let data = self
            .data
            .iter()
            .map(|&a| (a as u64 * c as u64 % self.q as u64) as Fq)
            .collect();
        MatFq { data, ..*self }
    }

    pub fn mul(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.cols, rhs.rows, "mul shape");
        let q = self.q as u64;
        let mut out = MatFq::zeros(self.rows, rhs.cols, self.q);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)] as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = (out[(r, c)] as u64 + a * rhs[(k, c)] as u64) % q;
                    out[(r, c)] = v as Fq;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.rows, "vec_mul shape");
        let q = self.q as u64;
        let mut out = vec![0u64; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for c in 0..self.cols {
                out[c] = (out[c] + a as u64 * self[(r, c)] as u64) % q;
            }
        }
        out.into_iter().map(|x| x as Fq).collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols, "mul_vec shape");
        let q = self.q as u64;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + self[(r, c)] as u64 * v[c] as u64) % q;
                }
                acc as Fq
            })
            .collect()
    }

    pub fn transpose(&self) -> MatFq {
        let mut out = MatFq::zeros(self.cols, self.rows, self.q);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn kron(&self, rhs: &MatFq) -> MatFq {
        let q = self.q as u64;
        let mut out = MatFq::zeros(self.rows * rhs.rows, self.cols * rhs.cols, self.q);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)] as u64;
                if a == 0 {
                    continue;
                }
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        out[(r1 * rhs.rows + r2, c1 * rhs.cols + c2)] =
                            (a * rhs[(r2, c2)] as u64 % q) as Fq;
                    }
                }
            }
        }
        out
    }

    /// `[A | B]` side by side.
    pub fn hstack(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.rows, rhs.rows, "hstack shape");
        MatFq::from_fn(self.rows, self.cols + rhs.cols, self.q, |r, c| {
            if c < self.cols {
                self[(r, c)]
            } else {
                rhs[(r, c - self.cols)]
            }
        })
    }

    /// `A` on top of `B`.
    pub fn vstack(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.cols, rhs.cols, "vstack shape");
        MatFq::from_fn(self.rows + rhs.rows, self.cols, self.q, |r, c| {
            if r < self.rows {
                self[(r, c)]
            } else {
                rhs[(r - self.rows, c)]
            }
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> MatFq {
        MatFq::from_fn(rows.len(), cols.len(), self.q, |r, c| {
            self[(rows.start + r, cols.start + c)]
        })
    }

    pub fn pow(&self, mut e: u128) -> MatFq {
        assert_eq!(self.rows, self.cols, "pow of non-square matrix");
        let mut base = self.clone();
        let mut acc = MatFq::identity(self.rows, self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Rank by Gaussian elimination with modular inverses.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let q = m.q as u64;
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows).find(|&r| m[(r, col)] != 0);
            let Some(p) = pivot else { continue };
            if p != rank {
                for c in 0..m.cols {
                    let tmp = m[(rank, c)];
                    m[(rank, c)] = m[(p, c)];
                    m[(p, c)] = tmp;
                }
            }
            let inv = fq_inverse(m[(rank, col)], m.q) as u64;
            for r in rank + 1..m.rows {
                let factor = m[(r, col)] as u64 * inv % q;
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = (m[(r, c)] as u64 + q - factor * m[(rank, c)] as u64 % q) % q;
                    m[(r, c)] = v as Fq;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn det(&self) -> Fq {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let q = m.q as u64;
        let mut det = 1u64;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| m[(r, col)] != 0) else {
                return 0;
            };
            if p != col {
                for c in 0..n {
                    let tmp = m[(col, c)];
                    m[(col, c)] = m[(p, c)];
                    m[(p, c)] = tmp;
                }
                det = det * (q - 1) % q; // swap flips the sign
            }
            det = det * m[(col, col)] as u64 % q;
            let inv = fq_inverse(m[(col, col)], m.q) as u64;
            for r in col + 1..n {
                let factor = m[(r, col)] as u64 * inv % q;
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let v = (m[(r, c)] as u64 + q - factor * m[(col, c)] as u64 % q) % q;
                    m[(r, c)] = v as Fq;
                }
            }
        }
        det as Fq
    }

    pub fn inverse(&self) -> Result<MatFq, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let q = self.q as u64;
        let mut m = self.clone();
        let mut inv = MatFq::identity(n, self.q);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| m[(r, col)] != 0)
                .ok_or(LinalgError::Singular)?;
            if p != col {
                for c in 0..n {
                    let tmp = m[(col, c)];
                    m[(col, c)] = m[(p, c)];
                    m[(p, c)] = tmp;
                    let tmp = inv[(col, c)];
                    inv[(col, c)] = inv[(p, c)];
                    inv[(p, c)] = tmp;
                }
            }
            let piv_inv = fq_inverse(m[(col, col)], m.q) as u64;
            for c in 0..n {
                m[(col, c)] = (m[(col, c)] as u64 * piv_inv % q) as Fq;
                inv[(col, c)] = (inv[(col, c)] as u64 * piv_inv % q) as Fq;
            }
            for r in 0..n {
                if r == col || m[(r, col)] == 0 {
                    continue;
                }
                let factor = m[(r, col)] as u64;
                for c in 0..n {
                    let v = (m[(r, c)] as u64 + q - factor * m[(col, c)] as u64 % q) % q;
                    m[(r, c)] = v as Fq;
                    let v = (inv[(r, c)] as u64 + q - factor * inv[(col, c)] as u64 % q) % q;
                    inv[(r, c)] = v as Fq;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = b`, if consistent.
    pub fn solve(&self, b: &[Fq]) -> Option<Vec<Fq>> {
        assert_eq!(b.len(), self.rows, "solve shape");
        let q = self.q as u64;
        let mut m = self.hstack(&MatFq::from_fn(self.rows, 1, self.q, |r, _| b[r]));
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&r| m[(r, col)] != 0) else {
                continue;
            };
            if p != rank {
                for c in 0..m.cols {
                    let tmp = m[(rank, c)];
                    m[(rank, c)] = m[(p, c)];
                    m[(p, c)] = tmp;
                }
            }
            let inv = fq_inverse(m[(rank, col)], m.q) as u64;
            for c in 0..m.cols {
                m[(rank, c)] = (m[(rank, c)] as u64 * inv % q) as Fq;
            }
            for r in 0..m.rows {
                if r == rank || m[(r, col)] == 0 {
                    continue;
                }
                let factor = m[(r, col)] as u64;
                for c in 0..m.cols {
                    let v = (m[(r, c)] as u64 + q - factor * m[(rank, c)] as u64 % q) % q;
                    m[(r, c)] = v as Fq;
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        // consistency: no row [0 .. 0 | nonzero]
        for r in rank..m.rows {
            if m[(r, self.cols)] != 0 {
                return None;
            }
        }
        let mut x = vec![0; self.cols];
        for &(r, c) in &pivots {
            x[c] = m[(r, self.cols)];
        }
        Some(x)
    }

    /// Evaluates a polynomial over `F_q` at this (square) matrix.
    pub fn poly_at(&self, f: &Poly) -> MatFq {
        assert_eq!(self.rows, self.cols, "poly_at of non-square matrix");
        let n = self.rows;
        let mut acc = MatFq::zeros(n, n, self.q);
        // Horner from the top coefficient down
        for i in (0..f.coeffs().len()).rev() {
            acc = acc.mul(self);
            let c = f.coeff(i);
            for d in 0..n {
                acc[(d, d)] = (acc[(d, d)] + c) % self.q;
            }
        }
        acc
    }

    /// Serializes as `"rows cols q"` then one line of digits per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.q);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(s: &str) -> Result<MatFq, LinalgError> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| LinalgError::Parse("empty input".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(LinalgError::Parse(format!("bad header `{header}`")));
        }
        let rows: usize = parts[0].parse().map_err(|_| LinalgError::Parse(header.into()))?;
        let cols: usize = parts[1].parse().map_err(|_| LinalgError::Parse(header.into()))?;
        let q: Fq = parts[2].parse().map_err(|_| LinalgError::Parse(header.into()))?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| LinalgError::Parse("missing row".into()))?;
            for tok in line.split_whitespace() {
                let v: Fq = tok.parse().map_err(|_| LinalgError::Parse(line.into()))?;
                if v >= q {
                    return Err(LinalgError::Parse(format!("entry {v} not reduced mod {q}")));
                }
                data.push(v);
            }
        }
        if data.len() != rows * cols {
            return Err(LinalgError::Parse("wrong number of entries".into()));
        }
        Ok(MatFq { rows, cols, q, data })
    }
}

impl fmt::Display for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// `C_L^power`: the L x L cyclic permutation matrix raised to `power`.
/// `C_L` itself has the block form `[[0, I_{L-1}], [1, 0]]`, so a row vector
/// times `C_L^p` is a right rotation by p positions.
pub fn cyclic_shift_matrix(l: usize, power: i64, q: Fq) -> MatFq {
    let p = power.rem_euclid(l as i64) as usize;
    MatFq::from_fn(l, l, q, |r, c| u32::from(c == (r + p) % l))
}

/// Right-rotates a row vector by `power` positions: `v * C_L^power`.
pub fn rotate_right(v: &[Fq], power: usize) -> Vec<Fq> {
    let l = v.len();
    let p = power % l;
    let mut out = vec![0; l];
    for (i, &x) in v.iter().enumerate() {
        out[(i + p) % l] = x;
    }
    out
}

// ---------------------------------------------------------------------------
// Matrices over F_{q^m}
// ---------------------------------------------------------------------------

/// A dense row-major matrix with entries in `F_{q^m}`. Operations take the
/// shared [`FieldSpec`] explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatFqm {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Index<(usize, usize)> for MatFqm {
    type Output = FieldElement;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for MatFqm {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }
}

impl MatFqm {
    pub fn zeros(fs: &FieldSpec, rows: usize, cols: usize) -> Self {
        MatFqm {
            rows,
            cols,
            data: vec![fs.zero(); rows * cols],
        }
    }

    pub fn identity(fs: &FieldSpec, n: usize) -> Self {
        let mut m = MatFqm::zeros(fs, n, n);
        for i in 0..n {
            m[(i, i)] = fs.one();
        }
        m
    }

    pub fn from_fn(
        fs: &FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut m = MatFqm::zeros(fs, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn add(&self, fs: &FieldSpec, rhs: &MatFqm) -> MatFqm {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| fs.add(a, b))
            .collect();
        MatFqm { data, ..*self }
    }

    pub fn mul(&self, fs: &FieldSpec, rhs: &MatFqm) -> MatFqm {
        assert_eq!(self.cols, rhs.rows, "mul shape");
        let mut out = MatFqm::zeros(fs, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let prod = fs.mul(a, &rhs[(k, c)]);
                    out[(r, c)] = fs.add(&out[(r, c)], &prod);
                }
            }
        }
        out
    }

    pub fn scalar_mul(&self, fs: &FieldSpec, s: &FieldElement) -> MatFqm {
        let data = self.data.iter().map(|a| fs.mul(a, s)).collect();
        MatFqm { data, ..*self }
    }

    pub fn transpose(&self) -> MatFqm {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        MatFqm {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Entrywise `x -> x^(q^s)`.
    pub fn hadamard_frobenius(&self, fs: &FieldSpec, s: usize) -> MatFqm {
        let data = self.data.iter().map(|a| fs.frobenius(a, s)).collect();
        MatFqm { data, ..*self }
    }

    pub fn rank(&self, fs: &FieldSpec) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != rank {
                for c in 0..m.cols {
                    let tmp = m[(rank, c)].clone();
                    m[(rank, c)] = m[(p, c)].clone();
                    m[(p, c)] = tmp;
                }
            }
            let inv = fs.inv(&m[(rank, col)]).expect("nonzero pivot");
            for r in rank + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = fs.mul(&m[(r, col)], &inv);
                for c in col..m.cols {
                    let sub = fs.mul(&factor, &m[(rank, c)]);
                    m[(r, c)] = fs.sub(&m[(r, c)], &sub);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn inverse(&self, fs: &FieldSpec) -> Result<MatFqm, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = MatFqm::identity(fs, n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !m[(r, col)].is_zero())
                .ok_or(LinalgError::Singular)?;
            if p != col {
                for c in 0..n {
                    let tmp = m[(col, c)].clone();
                    m[(col, c)] = m[(p, c)].clone();
                    m[(p, c)] = tmp;
                    let tmp = inv[(col, c)].clone();
                    inv[(col, c)] = inv[(p, c)].clone();
                    inv[(p, c)] = tmp;
                }
            }
            let piv_inv = fs.inv(&m[(col, col)]).expect("nonzero pivot");
            for c in 0..n {
                m[(col, c)] = fs.mul(&m[(col, c)], &piv_inv);
                inv[(col, c)] = fs.mul(&inv[(col, c)], &piv_inv);
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in 0..n {
                    let sub = fs.mul(&factor, &m[(col, c)]);
                    m[(r, c)] = fs.sub(&m[(r, c)], &sub);
                    let sub = fs.mul(&factor, &inv[(col, c)]);
                    inv[(r, c)] = fs.sub(&inv[(r, c)], &sub);
                }
            }
        }
        Ok(inv)
    }

    /// Projects onto `F_q` if every entry lies in the base field.
    pub fn to_fq(&self, fs: &FieldSpec) -> Result<MatFq, LinalgError> {
        let mut out = MatFq::zeros(self.rows, self.cols, fs.q());
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = fs
                    .as_base(&self[(r, c)])
                    .ok_or(LinalgError::NotOverBaseField)?;
            }
        }
        Ok(out)
    }

    pub fn from_fq(fs: &FieldSpec, m: &MatFq) -> MatFqm {
        MatFqm::from_fn(fs, m.rows(), m.cols(), |r, c| fs.from_base(m[(r, c)]))
    }
}

/// `M_o(v)`: columns are the coordinatewise q-power (Hadamard) powers of
/// `v^T`, i.e. `[v^T (v^T)^{oq} ... (v^T)^{oq^{N-1}}]` with `N` the field
/// degree.
pub fn m_o(fs: &FieldSpec, v: &[FieldElement]) -> MatFqm {
    let n = v.len();
    let big_n = fs.degree();
    MatFqm::from_fn(fs, n, big_n, |r, c| fs.frobenius(&v[r], c))
}

/// The Vandermonde pair `(V_L, V~_L)` on a primitive L-th root of unity:
/// `V_L[i][j] = b^(ij)`, `V~_L[i][j] = b^(-ij)`; their product is
/// `(L mod q) I_L`.
pub fn vandermonde_pair(
    fs: &FieldSpec,
    beta: &FieldElement,
    l: usize,
) -> Result<(MatFqm, MatFqm), LinalgError> {
    if fs.order(beta).map_err(|_| LinalgError::WrongOrder(l as u64))? != l as u128 {
        return Err(LinalgError::WrongOrder(l as u64));
    }
    let v = MatFqm::from_fn(fs, l, l, |i, j| fs.pow(beta, (i as u128) * (j as u128)));
    let beta_inv = fs.pow(beta, l as u128 - 1);
    let vt = MatFqm::from_fn(fs, l, l, |i, j| fs.pow(&beta_inv, (i as u128) * (j as u128)));
    Ok((v, vt))
}

/// The companion matrix `A(g)` of the field modulus, exactly as printed:
/// top row of negated coefficients `-p_{N-1} .. -p_0`, ones on the
/// subdiagonal.
pub fn companion_matrix(fs: &FieldSpec) -> MatFq {
    let n = fs.degree();
    let q = fs.q();
    let p = fs.modulus();
    MatFq::from_fn(n, n, q, |r, c| {
        if r == 0 {
            (q - p.coeff(n - 1 - c)) % q
        } else {
            u32::from(c == r - 1)
        }
    })
}

/// The matrix representation `A(b) = sum_i a_i A(g)^i` of a field element
/// written as `b = sum_i a_i g^i` over the polynomial basis.
pub fn element_matrix(fs: &FieldSpec, beta: &FieldElement) -> MatFq {
    let a = companion_matrix(fs);
    let n = fs.degree();
    let mut acc = MatFq::zeros(n, n, fs.q());
    let mut power = MatFq::identity(n, fs.q());
    for (i, &c) in beta.coeffs().iter().enumerate() {
        if i > 0 {
            power = power.mul(&a);
        }
        if c != 0 {
            acc = acc.add(&power.scalar_mul(c));
        }
    }
    acc
}

/// The monic polynomial of least degree annihilating `M`, found as the
/// first linear dependence among the vectorized powers `I, M, M^2, ...`.
pub fn minimal_polynomial(m: &MatFq) -> Poly {
    assert_eq!(m.rows(), m.cols(), "minimal polynomial of non-square matrix");
    let n = m.rows();
    let q = m.q();
    let dim = n * n;
    let mut powers: Vec<MatFq> = vec![MatFq::identity(n, q)];
    for d in 1..=n {
        powers.push(powers[d - 1].mul(m));
        // columns of the system are vec(M^i) for i < d
        let sys = MatFq::from_fn(dim, d, q, |r, c| powers[c].data()[r]);
        let target: Vec<Fq> = powers[d].data().to_vec();
        if let Some(x) = sys.solve(&target) {
            // M^d = sum x_i M^i  =>  f = x^d - sum x_i x^i
            let mut coeffs = vec![0; d + 1];
            for (i, &xi) in x.iter().enumerate() {
                coeffs[i] = (q - xi) % q;
            }
            coeffs[d] = 1;
            return Poly::from_coeffs(&coeffs);
        }
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree");
}

/// Verdict of the similarity-to-field-multiplication test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityVerdict {
    /// True iff `M` is similar to `V A(b') V^{-1}` for some `b'` in the
    /// degree-`J` extension field and invertible `V` over `F_q`.
    pub similar: bool,
    /// The minimal polynomial of `M`; similarity holds exactly when it is
    /// irreducible, which makes the column space a free module over
    /// `F_q[x]/(f)`.
    pub witness_poly: Poly,
}

/// Tests whether a square matrix over `F_q` is similar to the matrix
/// representation of multiplication by a field element.
pub fn similar_to_field_mult(m: &MatFq) -> SimilarityVerdict {
    let f = minimal_polynomial(m);
    let similar = crate::field::is_irreducible(&f, m.q());
    SimilarityVerdict {
        similar,
        witness_poly: f,
    }
}
