//! ASCII polygonal mesh files.
//!
//! ```text
//! dim 2
//! vertices N
//! x y            (N lines)
//! cells M
//! n v0 ... v{n-1} (M lines, counter-clockwise)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Faces are derived.

use std::io::Write;
use std::path::Path;

use super::{validate, PolytopalMesh, ValidateOptions};
use crate::error::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            self.last = i + 1;
            return Ok((i + 1, t.split_whitespace().collect()));
        }
        Err(Error::Parse {
            line: self.last + 1,
            message: "unexpected end of file".into(),
        })
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse '{tok}'"),
    })
}

fn header(lines: &mut Lines<'_>, keyword: &str) -> Result<usize> {
    let (ln, toks) = lines.next()?;
    if toks.len() != 2 || toks[0] != keyword {
        return Err(Error::Parse {
            line: ln,
            message: format!("expected '{keyword} <count>'"),
        });
    }
    parse_num(toks[1], ln)
}

/// Parses the mesh text and builds the mesh; no admissibility validation.
pub fn parse_mesh(text: &str) -> Result<PolytopalMesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let dim = header(&mut lines, "dim")?;
    if dim != 2 {
        return Err(Error::Parse {
            line: lines.last,
            message: format!("unsupported dimension {dim}"),
        });
    }
    let nv = header(&mut lines, "vertices")?;
    let mut points = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, toks) = lines.next()?;
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected 2 coordinates, found {}", toks.len()),
            });
        }
        let p = [parse_num::<f64>(toks[0], ln)?, parse_num::<f64>(toks[1], ln)?];
        if !p.iter().all(|c| c.is_finite()) {
            return Err(Error::Parse {
                line: ln,
                message: "non-finite coordinate".into(),
            });
        }
        points.push(p);
    }
    let nc = header(&mut lines, "cells")?;
    let mut polygons = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (ln, toks) = lines.next()?;
        let n: usize = parse_num(toks[0], ln)?;
        if toks.len() != n + 1 {
            return Err(Error::Parse {
                line: ln,
                message: format!("cell declares {n} vertices but lists {}", toks.len() - 1),
            });
        }
        let ids = toks[1..]
            .iter()
            .map(|t| {
                let v: usize = parse_num(t, ln)?;
                if v >= nv {
                    Err(Error::Parse {
                        line: ln,
                        message: format!("vertex index {v} out of range (0..{nv})"),
                    })
                } else {
                    Ok(v)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        polygons.push(ids);
    }
    PolytopalMesh::from_polygons(points, polygons)
}

/// Reads, builds and validates a mesh file. Any admissibility violation is
/// returned as an error naming the offending cell or face.
pub fn import_mesh(path: impl AsRef<Path>) -> Result<PolytopalMesh> {
    let text = std::fs::read_to_string(path)?;
    let mesh = parse_mesh(&text)?;
    let report = validate(&mesh, &ValidateOptions::default());
    if let Some(v) = report.violations.first() {
        return Err(v.to_error());
    }
    Ok(mesh)
}

pub fn write_mesh(mesh: &PolytopalMesh, mut out: impl Write) -> Result<()> {
    writeln!(out, "dim 2")?;
    writeln!(out, "vertices {}", mesh.vertices.len())?;
    for v in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e}", v.coords[0], v.coords[1])?;
    }
    writeln!(out, "cells {}", mesh.cells.len())?;
    for c in &mesh.cells {
        write!(out, "{}", c.vertex_ids.len())?;
        for v in &c.vertex_ids {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_cartesian, Rectangle};

    #[test]
    fn unit_square_file_matches_generator() {
        let text = "dim 2\nvertices 4\n0 0\n1 0\n1 1\n0 1\ncells 1\n4 0 1 2 3\n";
        let a = parse_mesh(text).unwrap();
        let b = generate_cartesian(Rectangle::unit(), 1, 1).unwrap();
        assert_eq!(a.cells[0].measure, b.cells[0].measure);
        assert_eq!(a.cells[0].diameter, b.cells[0].diameter);
        assert_eq!(a.cells[0].centroid, b.cells[0].centroid);
        assert_eq!(a.n_faces(), b.n_faces());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "dim 2\nvertices 2\n0 0\n1 x\ncells 0\n";
        match parse_mesh(text) {
            Err(Error::Parse { line: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let text = "dim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n3 0 1 7\n";
        match parse_mesh(text) {
            Err(Error::Parse { line: 7, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn write_then_parse_roundtrip() {
        let m = generate_cartesian(Rectangle::centered(1.0), 3, 2).unwrap();
        let mut buf = Vec::new();
        write_mesh(&m, &mut buf).unwrap();
        let back = parse_mesh(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.n_cells(), m.n_cells());
        assert_eq!(back.interior_face_ids, m.interior_face_ids);
        for (a, b) in back.cells.iter().zip(&m.cells) {
            assert_eq!(a.measure, b.measure);
        }
    }
}
