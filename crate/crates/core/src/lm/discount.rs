use num_traits::{FromPrimitive, Num};

use super::NGramCounts;
use crate::scalar::LogFloat;

/// Used for every discount at an order whose count-of-counts are degenerate.
pub const FALLBACK_DISCOUNT: f64 = 0.5;

/// Modified Kneser-Ney discounts `[D1, D2, D3+]` for each order.
#[derive(Debug, Clone, PartialEq)]
pub struct Discounts<F> {
    per_order: Vec<[F; 3]>,
}

impl<F: LogFloat> Discounts<F> {
    pub fn new(per_order: Vec<[F; 3]>) -> Self {
        Discounts { per_order }
    }

    pub fn order(&self) -> usize {
        self.per_order.len()
    }

    /// `[D1, D2, D3+]` for n-grams of length `k`.
    pub fn at(&self, k: usize) -> [F; 3] {
        self.per_order[k - 1]
    }

    /// Discount applied to an adjusted count at level `k`.
    pub fn for_count(&self, k: usize, count: u64) -> F {
        match count {
            0 => F::zero(),
            1 => self.per_order[k - 1][0],
            2 => self.per_order[k - 1][1],
            _ => self.per_order[k - 1][2],
        }
    }
}

/// Chen-Goodman estimates from the count-of-counts `[n1, n2, n3, n4]`.
///
/// Generic over the number type so the estimates can also be evaluated
/// exactly (e.g. with `num_rational::Ratio`). Returns `None` when any of the
/// count-of-counts is zero.
pub fn chen_goodman<T>(n: [u64; 4]) -> Option<[T; 3]>
where
    T: Num + FromPrimitive + Clone,
{
    if n.contains(&0) {
        return None;
    }
    let [n1, n2, n3, n4] = n.map(|c| T::from_u64(c).unwrap());
    let k = |x: u64| T::from_u64(x).unwrap();
    let y = n1.clone() / (n1.clone() + k(2) * n2.clone());
    let d1 = k(1) - k(2) * y.clone() * n2.clone() / n1;
    let d2 = k(2) - k(3) * y.clone() * n3.clone() / n2;
    let d3 = k(3) - k(4) * y * n4 / n3;
    Some([d1, d2, d3])
}

/// Keep each `Dk` inside `[0, k)`.
fn clamp<F: LogFloat>(raw: [F; 3]) -> [F; 3] {
    let eps = F::lit(1e-6);
    let mut out = raw;
    for (j, v) in out.iter_mut().enumerate() {
        let cap = F::from_count(j as u64 + 1) - eps;
        *v = v.max(F::zero()).min(cap);
    }
    out
}

pub fn estimate_discounts<F: LogFloat>(counts: &NGramCounts) -> Discounts<F> {
    let per_order = (1..=counts.order())
        .map(|k| match chen_goodman::<F>(counts.count_of_counts(k)) {
            Some(d) => clamp(d),
            None => [F::lit(FALLBACK_DISCOUNT); 3],
        })
        .collect();
    Discounts { per_order }
}
