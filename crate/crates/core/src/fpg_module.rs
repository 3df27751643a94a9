//! The group algebra F_p[G] for G = ⟨σ⟩ cyclic of order p, and finite
//! F_p[G]-modules given by a σ-matrix.
//!
//! The quotient A/A_i of the free module A = F_p[G]·τ is written in the
//! basis {1, x, x², …, x^{i−1}} with x the image of τ − 1, so that σ acts
//! as multiplication by 1 + x.

use std::fmt;

use crate::arith::{is_odd_prime, reduce};
use crate::error::{invalid, Error, Result};
use crate::linalg::{is_zero_vec, Matrix, Span};

/// An element of F_p[G]; `coeffs[k]` is the coefficient of σ^k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAlgebraElement {
    p: u64,
    coeffs: Vec<u64>,
}

fn check_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(invalid("p", format!("{p} is not an odd prime")))
    }
}

impl GroupAlgebraElement {
    /// Normal form of the integer polynomial Σ expr[k]·σ^k: exponents are
    /// folded with σ^p = 1 and coefficients reduced mod p.
    pub fn normal_form(p: u64, expr: &[i64]) -> Result<Self> {
        check_prime(p)?;
        let mut coeffs = vec![0; p as usize];
        for (k, &c) in expr.iter().enumerate() {
            let slot = k % p as usize;
            coeffs[slot] = (coeffs[slot] + reduce(c, p)) % p;
        }
        Ok(GroupAlgebraElement { p, coeffs })
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::normal_form(p, &[])
    }

    pub fn one(p: u64) -> Result<Self> {
        Self::normal_form(p, &[1])
    }

    pub fn sigma(p: u64) -> Result<Self> {
        Self::normal_form(p, &[0, 1])
    }

    /// ρ = σ − 1.
    pub fn rho(p: u64) -> Result<Self> {
        Self::normal_form(p, &[-1, 1])
    }

    /// The norm element 1 + σ + ⋯ + σ^{p−1}.
    pub fn norm_element(p: u64) -> Result<Self> {
        Self::normal_form(p, &vec![1; p as usize])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        GroupAlgebraElement { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + self.p - b) % self.p)
            .collect();
        GroupAlgebraElement { p: self.p, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let n = self.p as usize;
        let mut coeffs = vec![0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % n;
                coeffs[k] = (coeffs[k] + a * b) % self.p;
            }
        }
        GroupAlgebraElement { p: self.p, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = GroupAlgebraElement {
            p: self.p,
            coeffs: {
                let mut c = vec![0; self.p as usize];
                c[0] = 1;
                c
            },
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by this element on F_p[G] in the basis σ^k.
    pub fn action_matrix(&self) -> Matrix {
        let n = self.p as usize;
        let mut m = Matrix::zero(self.p, n, n);
        for col in 0..n {
            for (k, &a) in self.coeffs.iter().enumerate() {
                let row = (col + k) % n;
                m.set(row, col, (m.get(row, col) + a) % self.p);
            }
        }
        m
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "σ".to_string(),
                (1, c) => format!("{c}σ"),
                (k, 1) => format!("σ^{k}"),
                (k, c) => format!("{c}σ^{k}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A finite F_p[G]-module presented by the matrix of σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpGModule {
    p: u64,
    sigma: Matrix,
    labels: Option<Vec<String>>,
}

/// One indecomposable summand: a cyclic generator and the length of the
/// module it generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub generator: Vec<u64>,
    pub length: usize,
}

impl FpGModule {
    pub fn new(sigma: Matrix) -> Result<Self> {
        let p = sigma.prime();
        check_prime(p)?;
        if sigma.rows() != sigma.cols() {
            return Err(Error::DimensionMismatch {
                expected: sigma.rows(),
                found: sigma.cols(),
            });
        }
        let n = sigma.rows();
        if sigma.pow(p) != Matrix::identity(p, n) {
            return Err(Error::InvalidInput("σ-matrix does not satisfy σ^p = 1".into()));
        }
        Ok(FpGModule {
            p,
            sigma,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The cyclic module A/A_i, 1 ≤ i ≤ p, in the basis {1, x, …, x^{i−1}}.
    pub fn cyclic_quotient(p: u64, i: usize) -> Result<Self> {
        check_prime(p)?;
        if i == 0 || i as u64 > p {
            return Err(invalid("i", format!("need 1 ≤ i ≤ {p}, got {i}")));
        }
        let mut m = Matrix::identity(p, i);
        for k in 0..i - 1 {
            m.set(k + 1, k, 1);
        }
        let labels = (0..i)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            })
            .collect();
        FpGModule::new(m)?.with_labels(labels)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    pub fn sigma_matrix(&self) -> &Matrix {
        &self.sigma
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn rho_matrix(&self) -> Matrix {
        self.sigma.sub(&Matrix::identity(self.p, self.dim()))
    }

    fn check_vec(&self, v: &[u64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// ρ^k·v.
    pub fn rho_apply(&self, v: &[u64], k: usize) -> Result<Vec<u64>> {
        self.check_vec(v)?;
        let rho = self.rho_matrix();
        let mut w: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        for _ in 0..k {
            w = rho.mul_vec(&w);
        }
        Ok(w)
    }

    /// Length of the cyclic submodule generated by `v`: the least i with
    /// ρ^i·v = 0 (zero for the zero vector).
    pub fn module_length(&self, v: &[u64]) -> Result<usize> {
        self.check_vec(v)?;
        let rho = self.rho_matrix();
        let mut w: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        let mut len = 0;
        while !is_zero_vec(&w) {
            w = rho.mul_vec(&w);
            len += 1;
            debug_assert!(len as u64 <= self.p);
        }
        Ok(len)
    }

    /// The submodule generated by `vectors`, i.e. the span of all ρ^k v.
    pub fn generated_submodule(&self, vectors: &[Vec<u64>]) -> Result<Span> {
        let rho = self.rho_matrix();
        let mut span = Span::new(self.p, self.dim());
        for v in vectors {
            self.check_vec(v)?;
            let mut w = v.clone();
            while !is_zero_vec(&w) {
                span.insert(&w);
                w = rho.mul_vec(&w);
            }
        }
        Ok(span)
    }

    /// Splits the submodule generated by `generators` into cyclic summands.
    pub fn module_decompose(&self, generators: &[Vec<u64>]) -> Result<Vec<Block>> {
        let span = self.generated_submodule(generators)?;
        self.decompose_span(&span.basis())
    }

    /// Splits the linear span of `vectors`, which must be σ-stable, into
    /// cyclic summands.
    ///
    /// Chains are found top-down: at each level k the kernel of ρ^k inside
    /// the span is completed over ker ρ^{k−1} plus the images of longer
    /// chains, candidates taken in kernel-basis order.
    pub fn decompose_span(&self, vectors: &[Vec<u64>]) -> Result<Vec<Block>> {
        let p = self.p;
        let mut span = Span::new(p, self.dim());
        for g in vectors {
            self.check_vec(g)?;
            span.insert(g);
        }
        let basis = span.basis();
        for b in &basis {
            if !span.contains(&self.sigma.mul_vec(b)) {
                return Err(Error::InvalidInput("span is not σ-stable".into()));
            }
        }
        if basis.is_empty() {
            return Ok(Vec::new());
        }
        let bmat = Matrix::from_columns(p, self.dim(), &basis);
        let rho = self.rho_matrix();

        // ker ρ^k restricted to the span, expressed in ambient coordinates.
        let kernel_in_span = |k: usize| -> Vec<Vec<u64>> {
            let nk = rho.pow(k as u64).mul(&bmat);
            nk.kernel().iter().map(|c| bmat.mul_vec(c)).collect()
        };
        let mut height = 0;
        while !rho.pow(height as u64).mul(&bmat).is_zero() {
            height += 1;
        }

        let mut blocks: Vec<Block> = Vec::new();
        for k in (1..=height).rev() {
            let mut covered = Span::new(p, self.dim());
            for v in kernel_in_span(k - 1) {
                covered.insert(&v);
            }
            for b in &blocks {
                let w = self.rho_apply(&b.generator, b.length - k)?;
                covered.insert(&w);
            }
            for v in kernel_in_span(k) {
                if covered.insert(&v) {
                    blocks.push(Block {
                        generator: v,
                        length: k,
                    });
                }
            }
        }
        Ok(blocks)
    }
}

/// The trace form B(x, y) = λ(xy) on A/A_i, where λ reads the coefficient
/// of x^{i−1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityForm {
    p: u64,
    i: usize,
    gram: Matrix,
}

impl DualityForm {
    pub fn new(i: usize, p: u64) -> Result<Self> {
        check_prime(p)?;
        if i == 0 || i as u64 > p {
            return Err(invalid("i", format!("need 1 ≤ i ≤ {p}, got {i}")));
        }
        let mut gram = Matrix::zero(p, i, i);
        for a in 0..i {
            for b in 0..i {
                if a + b == i - 1 {
                    gram.set(a, b, 1);
                }
            }
        }
        Ok(DualityForm { p, i, gram })
    }

    pub fn length(&self) -> usize {
        self.i
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Product in the truncated ring F_p[x]/(x^i).
    pub fn ring_mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.i];
        for (a, &xa) in x.iter().enumerate() {
            for (b, &yb) in y.iter().enumerate() {
                if a + b < self.i {
                    out[a + b] = (out[a + b] + xa * yb) % self.p;
                }
            }
        }
        out
    }

    pub fn lambda(&self, x: &[u64]) -> u64 {
        x[self.i - 1] % self.p
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> Result<u64> {
        for v in [x, y] {
            if v.len() != self.i {
                return Err(Error::DimensionMismatch {
                    expected: self.i,
                    found: v.len(),
                });
            }
        }
        Ok(self.lambda(&self.ring_mul(x, y)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram == self.gram.transpose()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.gram.determinant() != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_squared_is_norm_element_at_three() {
        let p = 3;
        let rho = GroupAlgebraElement::rho(p).unwrap();
        assert_eq!(rho.pow(2).coeffs(), &[1, 1, 1]);
        assert_eq!(rho.pow(1).coeffs(), &[2, 1, 0]);
        assert!(rho.pow(3).is_zero());
    }

    #[test]
    fn even_prime_rejected() {
        assert!(GroupAlgebraElement::normal_form(2, &[1]).is_err());
        assert!(GroupAlgebraElement::normal_form(9, &[1]).is_err());
        assert!(FpGModule::cyclic_quotient(3, 4).is_err());
    }

    #[test]
    fn exponents_fold() {
        let e = GroupAlgebraElement::normal_form(5, &[1, 0, 0, 0, 0, 2, -1]).unwrap();
        assert_eq!(e.coeffs(), &[3, 4, 0, 0, 0]);
        assert_eq!(e.to_string(), "3 + 4σ");
    }

    #[test]
    fn length_of_cyclic_generator() {
        for i in 1..=5 {
            let m = FpGModule::cyclic_quotient(5, i).unwrap();
            let mut gen = vec![0; i];
            gen[0] = 1;
            assert_eq!(m.module_length(&gen).unwrap(), i);
            assert_eq!(m.module_length(&vec![0; i]).unwrap(), 0);
        }
    }

    #[test]
    fn embedded_jordan_block() {
        // dim 4: identity plus a single size-2 Jordan block on coordinates 1,2
        let p = 3;
        let mut s = Matrix::identity(p, 4);
        s.set(2, 1, 1);
        let m = FpGModule::new(s).unwrap();
        assert_eq!(m.module_length(&[0, 1, 0, 0]).unwrap(), 2);
        assert_eq!(m.module_length(&[1, 0, 0, 0]).unwrap(), 1);
        assert!(m.module_length(&[1, 0, 0]).is_err());
    }

    #[test]
    fn decompose_simple_cases() {
        let m = FpGModule::cyclic_quotient(3, 3).unwrap();
        let blocks = m.module_decompose(&[vec![1, 0, 0]]).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].length, 3);

        let triv = FpGModule::new(Matrix::identity(3, 2)).unwrap();
        let blocks = triv.module_decompose(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(blocks.iter().map(|b| b.length).collect::<Vec<_>>(), vec![1, 1]);

        let blocks = m.module_decompose(&[vec![0, 1, 0]]).unwrap();
        assert_eq!(blocks[0].length, 2);
        // the line through x is not σ-stable in A/A_3
        assert!(m.decompose_span(&[vec![0, 1, 0]]).is_err());
        assert_eq!(m.decompose_span(&[vec![0, 1, 0], vec![0, 0, 1]]).unwrap().len(), 1);
    }

    #[test]
    fn duality_form_values() {
        let b = DualityForm::new(3, 3).unwrap();
        assert_eq!(b.eval(&[1, 0, 0], &[0, 0, 1]).unwrap(), 1);
        assert_eq!(b.eval(&[0, 1, 0], &[0, 0, 1]).unwrap(), 0);
        let anti = Matrix::from_rows(3, &[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(b.gram(), &anti);
        assert!(b.is_symmetric() && b.is_nonsingular());
        assert!(DualityForm::new(0, 3).is_err());
        assert!(DualityForm::new(4, 3).is_err());
    }
}
