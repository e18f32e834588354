use std::sync::Arc;

use num_complex::Complex64;

use super::{ModularData, ModularSource, Rational};

/// Tensor product of theories, evaluated lazily.
///
/// Field ids are mixed-radix with the first factor most significant, so
/// `(a, b)` in `C ⊗ C'` has id `a·|C'| + b`.
#[derive(Clone, Debug)]
pub struct TensorTheory {
    factors: Vec<Arc<ModularData>>,
    strides: Vec<usize>,
    len: usize,
}

impl TensorTheory {
    pub fn new(factors: Vec<Arc<ModularData>>) -> TensorTheory {
        assert!(!factors.is_empty(), "tensor product of no factors");
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len() - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].len();
        }
        let len = strides[0] * factors[0].len();
        TensorTheory { factors, strides, len }
    }

    pub fn factors(&self) -> &[Arc<ModularData>] {
        &self.factors
    }

    pub fn split(&self, a: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.factors)
            .map(|(&st, f)| (a / st) % f.len())
            .collect()
    }

    pub fn join(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.strides).map(|(p, s)| p * s).sum()
    }

    pub fn materialize(&self) -> ModularData {
        ModularData::from_source(self)
    }
}

impl ModularSource for TensorTheory {
    fn len(&self) -> usize {
        self.len
    }

    fn s(&self, a: usize, b: usize) -> Complex64 {
        let mut z = Complex64::new(1.0, 0.0);
        for (f, &st) in self.factors.iter().zip(&self.strides) {
            let n = f.len();
            z *= f.s((a / st) % n, (b / st) % n);
        }
        z
    }

    fn h(&self, a: usize) -> Rational {
        self.factors.iter().zip(self.split(a)).map(|(f, x)| f.h(x)).sum()
    }

    fn central_charge(&self) -> Rational {
        self.factors.iter().map(|f| f.central_charge()).sum()
    }

    fn conj(&self, a: usize) -> usize {
        let parts: Vec<usize> = self.factors.iter().zip(self.split(a)).map(|(f, x)| f.conj(x)).collect();
        self.join(&parts)
    }

    fn label(&self, a: usize) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(self.split(a))
            .map(|(f, x)| f.label(x))
            .collect();
        parts.join("⊗")
    }

    fn find_label(&self, label: &str) -> Option<usize> {
        let pieces: Vec<&str> = label.split('⊗').collect();
        if pieces.len() != self.factors.len() {
            return None;
        }
        let mut parts = Vec::with_capacity(pieces.len());
        for (f, p) in self.factors.iter().zip(pieces) {
            parts.push(f.find_label(p)?);
        }
        Some(self.join(&parts))
    }
}
