//! Strict Wavefront OBJ subset: `v x y z` and triangular `f a b c` records
//! with 1-based indices.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::SurfaceMesh;
use crate::{Error, Real, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
}

pub fn load_mesh<T: Real>(path: &Path, format: MeshFormat) -> Result<SurfaceMesh<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        MeshFormat::Obj => parse_obj(&text),
    }
}

/// Parses OBJ text. Texture/normal references (`f 1/2/3 …`) are accepted and
/// ignored; grouping and material directives are skipped.
pub fn parse_obj<T: Real>(text: &str) -> Result<SurfaceMesh<T>> {
    let mut vertices = Vec::new();
    let mut faces: Vec<([i64; 3], usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut fields = line.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let rest: Vec<&str> = fields.collect();
        match tag {
            "v" => {
                if rest.len() < 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "vertex needs three coordinates".into(),
                    });
                }
                let mut xyz = [0.0f64; 3];
                for (slot, s) in xyz.iter_mut().zip(&rest) {
                    *slot = s.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad coordinate {s:?}"),
                    })?;
                }
                vertices.push(Vec3::from_f64(xyz));
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(Error::NonTriangleFace { line: line_no });
                }
                let mut tri = [0i64; 3];
                for (slot, s) in tri.iter_mut().zip(&rest) {
                    let head = s.split('/').next().unwrap_or("");
                    *slot = head.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad face index {s:?}"),
                    })?;
                }
                faces.push((tri, line_no));
            }
            "vn" | "vt" | "o" | "g" | "s" | "usemtl" | "mtllib" => {}
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unsupported record {other:?}"),
                })
            }
        }
    }
    let count = vertices.len();
    let panels = faces
        .into_iter()
        .map(|(tri, line)| {
            let mut p = [0usize; 3];
            for (slot, &i) in p.iter_mut().zip(&tri) {
                if i < 1 || i as usize > count {
                    return Err(Error::IndexOutOfRange {
                        line,
                        index: i,
                        count,
                    });
                }
                *slot = i as usize - 1;
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    SurfaceMesh::new(vertices, panels)
}

/// Writes the mesh in the same subset with 17 significant digits.
pub fn write_obj<T: Real, W: Write>(mesh: &SurfaceMesh<T>, mut out: W) -> std::io::Result<()> {
    for v in mesh.vertices() {
        writeln!(
            out,
            "v {:.16e} {:.16e} {:.16e}",
            v.x.as_f64(),
            v.y.as_f64(),
            v.z.as_f64()
        )?;
    }
    for p in mesh.panels() {
        writeln!(out, "f {} {} {}", p[0] + 1, p[1] + 1, p[2] + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let m: SurfaceMesh<f64> = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
        assert_eq!(m.n_panels(), 1);
        assert!((m.areas()[0] - 0.5).abs() < 1e-15);
        assert!((m.normals()[0] - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn tetrahedron_outward() {
        let text = "# tet\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 2 4\nf 1 4 3\nf 2 3 4\n";
        let m: SurfaceMesh<f64> = parse_obj(text).unwrap();
        assert_eq!(m.n_panels(), 4);
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn quad_face_reports_line() {
        let text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        let err = parse_obj::<f64>(text).unwrap_err();
        assert!(matches!(err, Error::NonTriangleFace { line: 5 }));
        assert_eq!(err.to_string(), "non-triangle face at line 5");
    }

    #[test]
    fn out_of_range_index() {
        let err = parse_obj::<f64>("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n").unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { line: 4, index: 9, .. }));
        let err = parse_obj::<f64>("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 0, .. }));
    }

    #[test]
    fn bad_number_reports_line() {
        let err = parse_obj::<f64>("v 0 0 0\nv 1 x 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn slash_indices_accepted() {
        let m: SurfaceMesh<f64> =
            parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n").unwrap();
        assert_eq!(m.n_panels(), 1);
    }

    #[test]
    fn write_then_read_is_exact() {
        let m = crate::geometry::make_icosphere::<f64>(2, 0.37, Vec3::new(0.1, 0.2, 0.3)).unwrap();
        let mut buf = Vec::new();
        write_obj(&m, &mut buf).unwrap();
        let back: SurfaceMesh<f64> = parse_obj(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.panels(), m.panels());
        for (a, b) in back.vertices().iter().zip(m.vertices()) {
            assert_eq!(a, b);
        }
    }
}
