use crate::{Error, Real, Result, Vec3};

/// Cube partition with centres `l/N`, half-width `H = 1/(2N)`, and the
/// Fourier index set `‖k‖_∞ ≤ N` on a DFT lattice of length `2N` per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralGrid {
    n: usize,
}

/// Largest supported `N`.
pub const MAX_GRID_N: usize = 512;

impl SpectralGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("grid size N must be ≥ 1".into()));
        }
        if n > MAX_GRID_N {
            return Err(Error::InvalidArgument(format!(
                "grid size N = {n} exceeds {MAX_GRID_N}"
            )));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Half-width `H` of a cube.
    pub fn h<T: Real>(&self) -> T {
        T::one() / T::from_usize_lossy(2 * self.n)
    }

    /// DFT length per axis, `2N`.
    #[inline]
    pub fn dft_len(&self) -> usize {
        2 * self.n
    }

    /// Number of lattice points `(2N)³`.
    #[inline]
    pub fn lattice_size(&self) -> usize {
        self.dft_len().pow(3)
    }

    /// Number of modes `(2N+1)³`.
    #[inline]
    pub fn n_modes(&self) -> usize {
        (2 * self.n + 1).pow(3)
    }

    /// Lattice bin of a signed index (`k mod 2N`).
    #[inline]
    pub fn bin(&self, k: i64) -> usize {
        k.rem_euclid(self.dft_len() as i64) as usize
    }

    /// Linear lattice position, last axis fastest.
    #[inline]
    pub fn lattice_index(&self, b: [usize; 3]) -> usize {
        let m = self.dft_len();
        (b[0] * m + b[1]) * m + b[2]
    }

    /// Linear lattice position of a signed triple.
    #[inline]
    pub fn lattice_index_signed(&self, k: [i64; 3]) -> usize {
        self.lattice_index([self.bin(k[0]), self.bin(k[1]), self.bin(k[2])])
    }

    /// Position of mode `k` in lexicographic order over `[−N, N]³`.
    #[inline]
    pub fn mode_index(&self, k: [i64; 3]) -> usize {
        let w = 2 * self.n as i64 + 1;
        let s = |v: i64| (v + self.n as i64) as usize;
        (s(k[0]) * w as usize + s(k[1])) * w as usize + s(k[2])
    }

    /// Inverse of [`mode_index`](Self::mode_index).
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let w = 2 * self.n + 1;
        let n = self.n as i64;
        [
            (idx / (w * w)) as i64 - n,
            ((idx / w) % w) as i64 - n,
            (idx % w) as i64 - n,
        ]
    }

    /// Centre `l/N` of cube `l`.
    pub fn center<T: Real>(&self, l: [i64; 3]) -> Vec3<T> {
        let inv = T::one() / T::from_usize_lossy(self.n);
        Vec3::new(
            T::lit(l[0] as f64) * inv,
            T::lit(l[1] as f64) * inv,
            T::lit(l[2] as f64) * inv,
        )
    }

    /// Cube of a surface point (`l_j = ⌊y_j N + ½⌋`, ties to the larger
    /// index) and local coordinates `t = (y − x_l)/H`.
    pub fn locate<T: Real>(&self, y: Vec3<T>) -> Result<([usize; 3], Vec3<T>)> {
        let nf = T::from_usize_lossy(self.n);
        let half = T::lit(0.5);
        let mut l = [0usize; 3];
        let mut t = [T::zero(); 3];
        for j in 0..3 {
            let s = y[j] * nf + half;
            let f = s.floor();
            let fi = f.to_i64().unwrap_or(-1);
            if fi < 0 || fi > self.n as i64 {
                return Err(Error::OutsideGrid {
                    x: y.x.as_f64(),
                    y: y.y.as_f64(),
                    z: y.z.as_f64(),
                });
            }
            l[j] = fi as usize;
            // t = 2(yN − l) = 2(s − ½ − l)
            t[j] = T::lit(2.0) * (s - f) - T::one();
        }
        Ok((l, Vec3::new(t[0], t[1], t[2])))
    }
}
