//! Rational filters and the partial-fraction data of `H(z)/z`.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = Ratio<i128>;

pub const MAX_FILTER_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    /// `H(z) = ∏_{k=1}^{q} k/(k+z)`, simple poles at `z = −k`.
    Product,
    /// `H(z) = (1+z)^{−q}`, one pole of multiplicity `q` at `z = −1`.
    Power,
}

impl FilterKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Product => "product",
            Self::Power => "power",
        }
    }
}

impl std::fmt::Display for FilterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(Self::Product),
            "power" => Ok(Self::Power),
            _ => Err(Error::InvalidArgument(format!(
                "unknown filter '{s}' (product, power)"
            ))),
        }
    }
}

/// A pole of `H(z)/z` at `z = −w²` with its principal-part coefficients:
/// `coeffs[j−1]` multiplies `1/(z + w²)^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub w2: Rational,
    pub coeffs: Vec<Rational>,
}

impl Pole {
    pub fn multiplicity(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `1/(z + w²)`.
    pub fn residue(&self) -> Rational {
        self.coeffs[0]
    }
}

/// Partial-fraction representation `H(z)/z = 1/z + Σ_k Σ_j c_kj/(z + w_k²)^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    kind: FilterKind,
    q: usize,
    poles: Vec<Pole>,
}

fn r(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| *x.numer() as f64 / *x.denom() as f64)
}

impl FilterSpec {
    /// Builds the filter of the given family and order (`1 ≤ q ≤ 12`).
    pub fn new(kind: FilterKind, q: usize) -> Result<Self> {
        if !(1..=MAX_FILTER_ORDER).contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "filter order q = {q} outside 1..={MAX_FILTER_ORDER}"
            )));
        }
        let poles = match kind {
            FilterKind::Product => (1..=q as i128)
                .map(|k| {
                    // Residue of ∏ j/(j+z) / z at z = −k.
                    let mut d = -r(1);
                    for j in (1..=q as i128).filter(|&j| j != k) {
                        d *= Rational::new(j, j - k);
                    }
                    Pole {
                        w2: r(k),
                        coeffs: vec![d],
                    }
                })
                .collect(),
            // 1/(z(1+z)^q) = 1/z − Σ_{j=1}^{q} 1/(1+z)^j
            FilterKind::Power => vec![Pole {
                w2: r(1),
                coeffs: vec![-r(1); q],
            }],
        };
        Ok(Self { kind, q, poles })
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    /// Simple-pole residues `[d_0, d_1, …]` with `d_0 = 1` at `z = 0`.
    pub fn residues(&self) -> Vec<Rational> {
        std::iter::once(r(1))
            .chain(self.poles.iter().map(Pole::residue))
            .collect()
    }

    pub fn residues_f64(&self) -> Vec<f64> {
        self.residues().iter().map(to_f64).collect()
    }

    /// `Σ_k d_k`, zero exactly for a valid filter.
    pub fn residue_sum(&self) -> Rational {
        self.residues().into_iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// Smallest `w_k²`; the split requires `δκ² < min w_k²`.
    pub fn min_w2(&self) -> f64 {
        self.poles
            .iter()
            .map(|p| to_f64(&p.w2))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed-form `H(z)`.
    pub fn eval(&self, z: f64) -> f64 {
        match self.kind {
            FilterKind::Product => (1..=self.q).map(|k| k as f64 / (k as f64 + z)).product(),
            FilterKind::Power => (1.0 + z).powi(-(self.q as i32)),
        }
    }

    /// `H(z)` rebuilt from the partial-fraction data.
    pub fn eval_from_poles(&self, z: f64) -> f64 {
        let tail: f64 = self
            .poles
            .iter()
            .map(|p| {
                let s = z + to_f64(&p.w2);
                p.coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| to_f64(c) / s.powi(j as i32 + 1))
                    .sum::<f64>()
            })
            .sum();
        1.0 + z * tail
    }

    /// Flips the sign of the first pole's residue. Used to check that the
    /// diagnostics notice a corrupted filter.
    #[doc(hidden)]
    pub fn inject_residue_sign_fault(&mut self) {
        let c = &mut self.poles[0].coeffs[0];
        *c = -*c;
    }
}

/// Exact polynomials `Q_j` with `(1/(j−1)!)·(d/dv)^{j−1} e^{i√v z}
/// = v^{1−j} Q_j(i√v z) e^{i√v z}`; `coeffs[m]` multiplies `x^m`.
pub fn confluent_polynomials(jmax: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![vec![r(1)]];
    for j in 1..jmax {
        let prev = &out[j - 1];
        let mut next = vec![Rational::zero(); prev.len() + 1];
        for (m, c) in prev.iter().enumerate() {
            // x·Q_j contributes to m+1; (2 − 2j + m)·Q_j to m.
            next[m + 1] += *c;
            next[m] += *c * r(2 - 2 * j as i128 + m as i128);
        }
        let scale = Rational::new(1, 2 * j as i128);
        out.push(next.into_iter().map(|c| c * scale).collect());
    }
    out
}

pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    to_f64(x)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_q1() {
        let f = FilterSpec::new(FilterKind::Product, 1).unwrap();
        assert_eq!(f.residues(), vec![r(1), r(-1)]);
        assert_eq!(f.poles()[0].w2, r(1));
    }

    #[test]
    fn product_q2() {
        let f = FilterSpec::new(FilterKind::Product, 2).unwrap();
        assert_eq!(f.residues(), vec![r(1), r(-2), r(1)]);
    }

    #[test]
    fn product_residues_are_signed_binomials() {
        let q = 7;
        let f = FilterSpec::new(FilterKind::Product, q).unwrap();
        let mut binom = 1i128;
        for (k, d) in f.residues().iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(*d, r(sign * binom));
            binom = binom * (q as i128 - k as i128) / (k as i128 + 1);
        }
    }

    #[test]
    fn residue_sums_vanish_exactly() {
        for kind in [FilterKind::Product, FilterKind::Power] {
            for q in 1..=MAX_FILTER_ORDER {
                let f = FilterSpec::new(kind, q).unwrap();
                assert!(f.residue_sum().is_zero(), "{kind} q={q}");
            }
        }
    }

    #[test]
    fn pole_form_reproduces_filter() {
        for kind in [FilterKind::Product, FilterKind::Power] {
            for q in [1, 3, 5, 8] {
                let f = FilterSpec::new(kind, q).unwrap();
                assert!((f.eval_from_poles(0.0) - 1.0).abs() < 1e-12);
                for &z in &[0.01, 0.3, 1.0, 2.7, 10.0] {
                    let a = f.eval(z);
                    let b = f.eval_from_poles(z);
                    assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-3), "{kind} q={q} z={z}");
                }
            }
        }
    }

    #[test]
    fn decay_bound() {
        for kind in [FilterKind::Product, FilterKind::Power] {
            for q in 1..=8 {
                let f = FilterSpec::new(kind, q).unwrap();
                let c: f64 = (1..=q).map(|k| k as f64).product();
                for i in 0..=2000 {
                    let z = i as f64 * 0.5;
                    let bound = c * 1f64.min(z.powi(-(q as i32)));
                    assert!(f.eval(z).abs() <= bound * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn order_out_of_range() {
        assert!(FilterSpec::new(FilterKind::Power, 0).is_err());
        assert!(FilterSpec::new(FilterKind::Product, 13).is_err());
    }

    #[test]
    fn fault_breaks_residue_sum() {
        let mut f = FilterSpec::new(FilterKind::Product, 3).unwrap();
        f.inject_residue_sign_fault();
        assert!(!f.residue_sum().is_zero());
    }

    #[test]
    fn confluent_polynomials_low_orders() {
        let q = confluent_polynomials(4);
        assert_eq!(q[0], vec![r(1)]);
        assert_eq!(q[1], vec![r(0), Rational::new(1, 2)]);
        // Q_3 = (x² − x)/8
        assert_eq!(q[2], vec![r(0), Rational::new(-1, 8), Rational::new(1, 8)]);
        for qj in &q[1..] {
            assert!(qj[0].is_zero());
        }
    }
}
