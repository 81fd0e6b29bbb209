use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = Σ_l x_l e^{−πi k·l/N}`.
    Forward,
    /// Unnormalised conjugate transform.
    Inverse,
}

/// Three-dimensional DFT of length `m = 2N` per axis on a row-major
/// `m³` array (last axis fastest). Counts the number of 3-D transforms.
pub struct Dft3<T: Real> {
    m: usize,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    calls: AtomicUsize,
}

impl<T: Real> std::fmt::Debug for Dft3<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft3").field("m", &self.m).field("calls", &self.calls()).finish()
    }
}

impl<T: Real> Dft3<T> {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
            calls: AtomicUsize::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Number of 3-D transforms run so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    pub fn transform(&self, data: &mut [Complex<T>], dir: Direction) -> Result<()> {
        self.transform_pruned(data, dir, self.m)
    }

    /// Transform where only indices `< keep` on every axis matter: for
    /// [`Direction::Forward`] the input must vanish elsewhere, for
    /// [`Direction::Inverse`] only outputs in that block are valid.
    pub fn transform_pruned(&self, data: &mut [Complex<T>], dir: Direction, keep: usize) -> Result<()> {
        let m = self.m;
        if data.len() != m * m * m {
            return Err(Error::Shape {
                expected: m * m * m,
                got: data.len(),
            });
        }
        let keep = keep.min(m);
        self.calls.fetch_add(1, Ordering::Relaxed);
        let plan = match dir {
            Direction::Forward => &self.fwd,
            Direction::Inverse => &self.inv,
        };
        match dir {
            Direction::Forward => {
                self.axis2(data, plan, keep, keep);
                self.axis1(data, plan, keep);
                self.axis0(data, plan);
            }
            Direction::Inverse => {
                self.axis0(data, plan);
                self.axis1(data, plan, keep);
                self.axis2(data, plan, keep, keep);
            }
        }
        Ok(())
    }

    /// Lines along the last axis for `i0 < r0`, `i1 < r1`.
    fn axis2(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>, r0: usize, r1: usize) {
        let m = self.m;
        data.par_chunks_mut(m * m).take(r0).for_each(|plane| {
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
            for line in plane.chunks_mut(m).take(r1) {
                plan.process_with_scratch(line, &mut scratch);
            }
        });
    }

    /// Lines along the middle axis for `i0 < r0`, all `i2`.
    fn axis1(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>, r0: usize) {
        let m = self.m;
        data.par_chunks_mut(m * m).take(r0).for_each(|plane| {
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
            let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
            for i2 in 0..m {
                for i1 in 0..m {
                    buf[i1] = plane[i1 * m + i2];
                }
                plan.process_with_scratch(&mut buf, &mut scratch);
                for i1 in 0..m {
                    plane[i1 * m + i2] = buf[i1];
                }
            }
        });
    }

    /// Lines along the first axis, all `i1`, `i2`.
    fn axis0(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let m = self.m;
        let src: &[Complex<T>] = data;
        let lines: Vec<Vec<Complex<T>>> = (0..m * m)
            .into_par_iter()
            .map_init(
                || vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()],
                |scratch, j| {
                    let mut buf: Vec<Complex<T>> = (0..m).map(|i0| src[i0 * m * m + j]).collect();
                    plan.process_with_scratch(&mut buf, scratch);
                    buf
                },
            )
            .collect();
        for (j, line) in lines.into_iter().enumerate() {
            for (i0, v) in line.into_iter().enumerate() {
                data[i0 * m * m + j] = v;
            }
        }
    }
}
