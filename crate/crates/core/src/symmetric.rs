use crate::scalar::Scalar;

/// Elementary symmetric sums `e_0..=e_k` of a value multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSums<T> {
    e: Vec<T>,
}

impl<T: Scalar> SymmetricSums<T> {
    pub fn as_slice(&self) -> &[T] {
        &self.e
    }

    pub fn get(&self, k: usize) -> Option<&T> {
        self.e.get(k)
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.e
    }
}

/// Coefficients of `prod_j (1 + v_j x)` up to degree `k_max`, one factor at a
/// time. With nonnegative inputs no subtraction ever happens.
pub fn elementary_symmetric_sums<T: Scalar>(values: &[T], k_max: usize) -> SymmetricSums<T> {
    let k_max = k_max.min(values.len());
    let mut e = vec![T::zero(); k_max + 1];
    e[0] = T::one();
    for (j, v) in values.iter().enumerate() {
        let top = (j + 1).min(k_max);
        for k in (1..=top).rev() {
            e[k] = e[k].clone() + v.clone() * e[k - 1].clone();
        }
    }
    SymmetricSums { e }
}

/// Means of the elementary symmetric sums, `e_k / C(len, k)`, for every `k`.
///
/// Each update is a convex combination, so the recurrence neither overflows
/// nor cancels however long the input is.
pub fn mean_symmetric_sums(values: &[f64]) -> Vec<f64> {
    let mut mean = vec![0.0f64; values.len() + 1];
    mean[0] = 1.0;
    for (idx, &v) in values.iter().enumerate() {
        let j = (idx + 1) as f64;
        for k in (1..=idx + 1).rev() {
            let kf = k as f64;
            mean[k] = ((j - kf) / j) * mean[k] + (kf / j) * v * mean[k - 1];
        }
    }
    mean
}
