use num_complex::Complex;

use super::SpectralGrid;
use crate::{Error, Real, Result};

/// Complex values indexed by `k ∈ [−N, N]³`, lexicographic with the first
/// component slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs<T> {
    grid: SpectralGrid,
    values: Vec<Complex<T>>,
}

impl<T: Real> FourierCoeffs<T> {
    pub fn zeros(grid: SpectralGrid) -> Self {
        Self {
            grid,
            values: vec![Complex::new(T::zero(), T::zero()); grid.n_modes()],
        }
    }

    pub fn from_values(grid: SpectralGrid, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.n_modes() {
            return Err(Error::Shape {
                expected: grid.n_modes(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> SpectralGrid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    #[inline]
    pub fn get(&self, k: [i64; 3]) -> Complex<T> {
        self.values[self.grid.mode_index(k)]
    }

    #[inline]
    pub fn set(&mut self, k: [i64; 3], v: Complex<T>) {
        let i = self.grid.mode_index(k);
        self.values[i] = v;
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    /// `(k, value)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = ([i64; 3], Complex<T>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.grid.mode(i), *v))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Shape {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }
}
