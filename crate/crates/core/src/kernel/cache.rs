//! On-disk store for `Ĝ_k`: one JSON header line followed by little-endian
//! `f64` pairs `(re, im)` in lexicographic `k` order.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::FilterKind;
use crate::nufft::{FourierCoeffs, SpectralGrid};
use crate::{Error, Real, Result};

/// Everything `Ĝ_k` depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhatHeader {
    pub kappa: f64,
    pub delta: f64,
    pub filter: FilterKind,
    pub q: usize,
    pub n: usize,
    pub p: usize,
    pub d: f64,
    pub cube_order: usize,
    pub scalar: String,
}

#[derive(Debug, Clone)]
pub struct GhatCache {
    dir: PathBuf,
}

impl GhatCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File name derived from a SHA-256 digest of the header.
    pub fn path_for(&self, header: &GhatHeader) -> PathBuf {
        let json = serde_json::to_string(header).expect("header serialises");
        let digest = Sha256::digest(json.as_bytes());
        let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("ghat-{hex}.bin"))
    }

    /// Cached coefficients for `header`, or `None` if absent.
    pub fn load<T: Real>(&self, header: &GhatHeader) -> Result<Option<FourierCoeffs<T>>> {
        let path = self.path_for(header);
        if !path.exists() {
            return Ok(None);
        }
        read_file(&path, header).map(Some)
    }

    pub fn store<T: Real>(&self, header: &GhatHeader, coeffs: &FourierCoeffs<T>) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path_for(header);
        let tmp = path.with_extension("tmp");
        write_file(&tmp, header, coeffs)?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

pub fn write_file<T: Real>(path: &Path, header: &GhatHeader, coeffs: &FourierCoeffs<T>) -> Result<()> {
    let mut buf = serde_json::to_vec(header).expect("header serialises");
    buf.push(b'\n');
    buf.reserve(coeffs.values().len() * 16);
    for v in coeffs.values() {
        buf.extend_from_slice(&v.re.as_f64().to_le_bytes());
        buf.extend_from_slice(&v.im.as_f64().to_le_bytes());
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads a cache file, requiring its header to equal `expected`.
pub fn read_file<T: Real>(path: &Path, expected: &GhatHeader) -> Result<FourierCoeffs<T>> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(f);
    let mut line = String::new();
    r.read_line(&mut line).map_err(|e| Error::io(path, e))?;
    let header: GhatHeader = serde_json::from_str(line.trim_end()).map_err(|e| Error::CacheCorrupt {
        path: path.to_path_buf(),
        msg: format!("bad header: {e}"),
    })?;
    if &header != expected {
        return Err(Error::CacheMismatch {
            path: path.to_path_buf(),
        });
    }
    let grid = SpectralGrid::new(header.n)?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
    if bytes.len() != grid.n_modes() * 16 {
        return Err(Error::CacheCorrupt {
            path: path.to_path_buf(),
            msg: format!("expected {} bytes of data, found {}", grid.n_modes() * 16, bytes.len()),
        });
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    FourierCoeffs::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(n: usize) -> GhatHeader {
        GhatHeader {
            kappa: 3.5,
            delta: 1e-3,
            filter: FilterKind::Power,
            q: 5,
            n,
            p: 4,
            d: 0.1,
            cube_order: 5,
            scalar: "f64".into(),
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GhatCache::new(dir.path());
        let h = header(2);
        let grid = SpectralGrid::new(2).unwrap();
        let vals: Vec<Complex<f64>> = (0..grid.n_modes())
            .map(|i| Complex::new((i as f64).sin() / 3.0, 1.0 / (i as f64 + 0.7)))
            .collect();
        let c = FourierCoeffs::from_values(grid, vals).unwrap();
        assert!(cache.load::<f64>(&h).unwrap().is_none());
        cache.store(&h, &c).unwrap();
        let back = cache.load::<f64>(&h).unwrap().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn header_mismatch_and_truncation_detected() {
        let dir = tempfile::tempdir().unwrap();
        let grid = SpectralGrid::new(1).unwrap();
        let c = FourierCoeffs::<f64>::zeros(grid);
        let path = dir.path().join("x.bin");
        write_file(&path, &header(1), &c).unwrap();
        let mut other = header(1);
        other.kappa = 3.6;
        assert!(matches!(read_file::<f64>(&path, &other), Err(Error::CacheMismatch { .. })));
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(read_file::<f64>(&path, &header(1)), Err(Error::CacheCorrupt { .. })));
    }

    #[test]
    fn names_depend_on_every_field() {
        let cache = GhatCache::new("/tmp");
        let a = cache.path_for(&header(4));
        let mut h = header(4);
        h.cube_order = 6;
        assert_ne!(a, cache.path_for(&h));
        assert_eq!(a, cache.path_for(&header(4)));
    }
}
