use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::linalg::{ComplexSparse, C64};

use super::IoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmField {
    Real,
    Complex,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmHeader {
    pub format: MmFormat,
    pub field: MmField,
    pub symmetry: MmSymmetry,
    pub rows: usize,
    pub cols: usize,
    /// Entry count declared on the size line (stored entries, before unfolding).
    pub entries: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMarket {
    pub header: MmHeader,
    /// Symmetry unfolded into general storage, duplicates summed.
    pub matrix: ComplexSparse,
}

/// Read a Matrix Market file into general CSR storage.
pub fn parse_matrix_market(path: impl AsRef<Path>) -> Result<ComplexSparse, IoError> {
    read_matrix_market(path).map(|mm| mm.matrix)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MatrixMarket, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_matrix_market_str(&text)
}

fn parse_header(line: &str) -> Result<(MmFormat, MmField, MmSymmetry), IoError> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(IoError::Header(format!(
            "expected '%%MatrixMarket matrix <format> <field> <symmetry>', got '{line}'"
        )));
    }
    let format = match words[2].as_str() {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        other => return Err(IoError::Header(format!("unknown format '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => MmField::Real,
        "complex" => MmField::Complex,
        "integer" => MmField::Integer,
        "pattern" => return Err(IoError::Pattern),
        other => return Err(IoError::Header(format!("unknown field '{other}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "skew-symmetric" => MmSymmetry::SkewSymmetric,
        "hermitian" => MmSymmetry::Hermitian,
        other => return Err(IoError::Header(format!("unknown symmetry '{other}'"))),
    };
    if symmetry == MmSymmetry::Hermitian && field != MmField::Complex && field != MmField::Real {
        return Err(IoError::Header(
            "hermitian symmetry needs a real or complex field".into(),
        ));
    }
    Ok((format, field, symmetry))
}

fn parse_number<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, IoError> {
    let tok = tok.ok_or_else(|| IoError::Entry {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| IoError::Entry {
        line,
        message: format!("cannot parse {what} '{tok}'"),
    })
}

fn parse_value<'a>(
    toks: &mut impl Iterator<Item = &'a str>,
    field: MmField,
    line: usize,
) -> Result<C64, IoError> {
    let re: f64 = parse_number(toks.next(), line, "value")?;
    let im: f64 = match field {
        MmField::Complex => parse_number(toks.next(), line, "imaginary part")?,
        _ => 0.0,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(IoError::Entry {
            line,
            message: "non-finite value".into(),
        });
    }
    Ok(C64::new(re, im))
}

/// Parse Matrix Market text. Symmetric, skew-symmetric and hermitian storage
/// is mirrored across the diagonal; 1-based indices become 0-based.
pub fn parse_matrix_market_str(text: &str) -> Result<MatrixMarket, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines
        .next()
        .ok_or_else(|| IoError::Header("empty file".into()))?;
    let (format, field, symmetry) = parse_header(first.trim())?;
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body
        .next()
        .ok_or_else(|| IoError::Header("missing size line".into()))?;
    let mut toks = size.split_whitespace();
    let rows: usize = parse_number(toks.next(), size_line, "row count")?;
    let cols: usize = parse_number(toks.next(), size_line, "column count")?;
    let declared = match format {
        MmFormat::Coordinate => parse_number(toks.next(), size_line, "entry count")?,
        MmFormat::Array => match symmetry {
            MmSymmetry::General => rows * cols,
            MmSymmetry::SkewSymmetric => rows * rows.saturating_sub(1) / 2,
            _ => rows * (rows + 1) / 2,
        },
    };
    if toks.next().is_some() {
        return Err(IoError::Entry {
            line: size_line,
            message: "trailing tokens on size line".into(),
        });
    }
    if symmetry != MmSymmetry::General && rows != cols {
        return Err(IoError::Header(format!(
            "{rows}x{cols} matrix cannot carry a symmetry"
        )));
    }

    let mut stored: Vec<(usize, usize, C64)> = Vec::with_capacity(declared);
    // Array storage runs down columns, only over the stored triangle.
    let mut array_positions = (0..cols).flat_map(|j| {
        let start = match symmetry {
            MmSymmetry::General => 0,
            MmSymmetry::SkewSymmetric => j + 1,
            _ => j,
        };
        (start..rows).map(move |i| (i, j))
    });
    for (line, text) in body {
        let mut toks = text.split_whitespace();
        let (i, j) = match format {
            MmFormat::Coordinate => {
                let i: usize = parse_number(toks.next(), line, "row index")?;
                let j: usize = parse_number(toks.next(), line, "column index")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(IoError::IndexOutOfRange {
                        line,
                        row: i,
                        col: j,
                    });
                }
                (i - 1, j - 1)
            }
            MmFormat::Array => array_positions.next().ok_or(IoError::Count {
                expected: declared,
                found: stored.len() + 1,
            })?,
        };
        let v = parse_value(&mut toks, field, line)?;
        if toks.next().is_some() {
            return Err(IoError::Entry {
                line,
                message: "trailing tokens".into(),
            });
        }
        stored.push((i, j, v));
    }
    if stored.len() != declared {
        return Err(IoError::Count {
            expected: declared,
            found: stored.len(),
        });
    }

    let mut triplets = Vec::with_capacity(2 * stored.len());
    for &(i, j, v) in &stored {
        triplets.push((i, j, v));
        if i != j {
            match symmetry {
                MmSymmetry::General => {}
                MmSymmetry::Symmetric => triplets.push((j, i, v)),
                MmSymmetry::SkewSymmetric => triplets.push((j, i, -v)),
                MmSymmetry::Hermitian => triplets.push((j, i, v.conj())),
            }
        }
    }
    let matrix = ComplexSparse::from_triplets(rows, cols, &triplets)?;
    Ok(MatrixMarket {
        header: MmHeader {
            format,
            field,
            symmetry,
            rows,
            cols,
            entries: declared,
        },
        matrix,
    })
}

/// Coordinate/general text for `m`. The field is `real` when every imaginary
/// part is `+0.0`, otherwise `complex`. Values carry 17 significant digits, so
/// parsing the output reproduces every stored value bit for bit.
pub fn matrix_market_string(m: &ComplexSparse) -> String {
    let real = m.values().iter().all(|z| z.im.to_bits() == 0);
    let mut out = String::new();
    let field = if real { "real" } else { "complex" };
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate {field} general");
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz());
    for (i, j, v) in m.triplets() {
        if real {
            let _ = writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v.re);
        } else {
            let _ = writeln!(out, "{} {} {:.16e} {:.16e}", i + 1, j + 1, v.re, v.im);
        }
    }
    out
}

pub fn write_matrix_market(m: &ComplexSparse, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, matrix_market_string(m)).map_err(|e| IoError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_diagonal() {
        let text =
            "%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 1 1.0 0.0\n2 2 0.0 1.0\n";
        let mm = parse_matrix_market_str(text).unwrap();
        let d = mm.matrix.to_dense();
        assert_eq!(d[(0, 0)], c(1.0, 0.0));
        assert_eq!(d[(1, 1)], c(0.0, 1.0));
        assert_eq!(d[(0, 1)], c(0.0, 0.0));
        assert_eq!(mm.header.entries, 2);
    }

    #[test]
    fn symmetric_lower_triangle_unfolds_exactly() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 4\n1 1 2.5\n2 1 -1.25\n3 2 0.75\n3 3 4\n";
        let m = parse_matrix_market_str(text).unwrap().matrix;
        assert_eq!(m.nnz(), 6);
        assert_eq!(m.transpose(), m);
        assert_eq!(m.to_dense()[(0, 1)], c(-1.25, 0.0));
    }

    #[test]
    fn hermitian_and_skew_unfolding() {
        let h = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 1 0\n2 1 2 3\n";
        let m = parse_matrix_market_str(h).unwrap().matrix;
        assert_eq!(m.adjoint(), m);
        assert_eq!(m.to_dense()[(0, 1)], c(2.0, -3.0));
        let s = "%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 5\n";
        let d = parse_matrix_market_str(s).unwrap().matrix.to_dense();
        assert_eq!(d[(1, 0)], c(5.0, 0.0));
        assert_eq!(d[(0, 1)], c(-5.0, 0.0));
    }

    #[test]
    fn array_general_and_symmetric() {
        let g = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
        let d = parse_matrix_market_str(g).unwrap().matrix.to_dense();
        assert_eq!(d[(1, 0)], c(2.0, 0.0));
        assert_eq!(d[(0, 1)], c(3.0, 0.0));
        let s = "%%MatrixMarket matrix array complex symmetric\n2 2\n1 0\n2 1\n3 0\n";
        let d = parse_matrix_market_str(s).unwrap().matrix.to_dense();
        assert_eq!(d[(0, 1)], c(2.0, 1.0));
        assert_eq!(d[(1, 0)], c(2.0, 1.0));
        assert_eq!(d[(1, 1)], c(3.0, 0.0));
    }

    #[test]
    fn duplicates_are_summed() {
        let t = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 2 1.5\n1 2 2.0\n2 1 1\n";
        let m = parse_matrix_market_str(t).unwrap().matrix;
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.to_dense()[(0, 1)], c(3.5, 0.0));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let bad = [
            ("", "empty"),
            (
                "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n",
                "pattern",
            ),
            (
                "%%MatrixMarket tensor coordinate real general\n2 2 0\n",
                "header",
            ),
            (
                "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
                "range",
            ),
            (
                "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
                "count",
            ),
            (
                "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 abc\n",
                "value",
            ),
            (
                "%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n",
                "shape",
            ),
        ];
        for (text, what) in bad {
            assert!(parse_matrix_market_str(text).is_err(), "{what}");
        }
        assert_eq!(
            parse_matrix_market_str(bad[1].0).unwrap_err(),
            IoError::Pattern
        );
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("nhfeast-mm-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.mtx");
        let m =
            ComplexSparse::from_triplets(3, 3, &[(0, 0, c(0.1, 0.0)), (2, 1, c(1.0 / 3.0, 0.0))])
                .unwrap();
        write_matrix_market(&m, &path).unwrap();
        assert!(std::fs::read_to_string(&path)
            .unwrap()
            .contains("coordinate real general"));
        assert_eq!(parse_matrix_market(&path).unwrap(), m);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
            -1e3..1e3f64,
            Just(0.0),
            Just(-0.0),
        ]
    }

    proptest! {
        #[test]
        fn round_trip_is_bitwise(
            rows in 1usize..8,
            cols in 1usize..8,
            entries in proptest::collection::vec((0usize..8, 0usize..8, finite(), finite()), 0..20),
        ) {
            let trip: Vec<_> = entries
                .into_iter()
                .map(|(i, j, re, im)| (i % rows, j % cols, C64::new(re, im)))
                .collect();
            // Deduplicate positions so summation does not change stored values.
            let mut seen = std::collections::HashSet::new();
            let trip: Vec<_> = trip.into_iter().filter(|t| seen.insert((t.0, t.1))).collect();
            let m = ComplexSparse::from_triplets(rows, cols, &trip).unwrap();
            let back = parse_matrix_market_str(&matrix_market_string(&m)).unwrap().matrix;
            prop_assert_eq!(back.row_ptr(), m.row_ptr());
            prop_assert_eq!(back.col_idx(), m.col_idx());
            for (a, b) in back.values().iter().zip(m.values()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
