//! Plain-text point files: one point per line, `x y [z] [label]`.
//!
//! `#` starts a comment. A `# dim=2` or `# dim=3` comment fixes the
//! dimension, which is how a 2D file with labels (three columns) is told
//! apart from an unlabelled 3D one. Without it the column count decides:
//! two columns are 2D, three are 3D, four are 3D with labels.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Point, PointCloud};
use crate::error::{Error, Result};

pub fn load_point_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path)
}

pub fn save_point_cloud(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render(cloud)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn render(cloud: &PointCloud) -> String {
    let mut out = format!("# dim={}\n", cloud.dim());
    for (i, p) in cloud.points().iter().enumerate() {
        // `{}` prints the shortest string that parses back to the same f64
        let _ = write!(out, "{} {}", p[0], p[1]);
        if cloud.dim() == 3 {
            let _ = write!(out, " {}", p[2]);
        }
        if let Some(l) = cloud.labels() {
            let _ = write!(out, " {}", l[i]);
        }
        out.push('\n');
    }
    out
}

fn parse(text: &str, path: &Path) -> Result<PointCloud> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut dim: Option<usize> = None;
    let mut columns: Option<usize> = None;
    let mut coords: Vec<Point> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut first_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let (body, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(v) = c.trim().strip_prefix("dim=") {
                let d: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| err(lineno, format!("bad dimension directive `{}`", c.trim())))?;
                if d != 2 && d != 3 {
                    return Err(err(lineno, format!("dimension must be 2 or 3, got {d}")));
                }
                if !coords.is_empty() && dim != Some(d) {
                    return Err(err(lineno, "dimension directive after data".into()));
                }
                dim = Some(d);
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        match columns {
            None => {
                columns = Some(fields.len());
                first_line = lineno;
            }
            Some(c) if c != fields.len() => {
                return Err(err(
                    lineno,
                    format!(
                        "mixed dimensions: {} columns here, {c} on line {first_line}",
                        fields.len()
                    ),
                ));
            }
            _ => {}
        }
        let d = match dim {
            Some(d) => d,
            None => match fields.len() {
                2 => 2,
                3 | 4 => 3,
                n => return Err(err(lineno, format!("expected 2 to 4 columns, got {n}"))),
            },
        };
        dim.get_or_insert(d);
        if fields.len() < d {
            return Err(err(lineno, format!("too few columns for a {d}D point")));
        }
        let has_label = match fields.len() - d {
            0 => false,
            1 => true,
            _ => return Err(err(lineno, format!("too many columns for a {d}D point"))),
        };
        let mut p = [0.0; 3];
        for (j, f) in fields[..d].iter().enumerate() {
            let v: f64 = f
                .parse()
                .map_err(|_| err(lineno, format!("`{f}` is not a number")))?;
            if !v.is_finite() {
                return Err(err(lineno, format!("`{f}` is not finite")));
            }
            p[j] = v;
        }
        if has_label {
            let f = fields[d];
            labels.push(
                f.parse().map_err(|_| {
                    err(lineno, format!("`{f}` is not a nonnegative integer label"))
                })?,
            );
        }
        coords.push(p);
    }
    if coords.is_empty() {
        return Err(err(0, "no points in file".into()));
    }
    let labels = (!labels.is_empty()).then_some(labels);
    PointCloud::new(dim.unwrap_or(3), coords, labels).map_err(|e| err(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str) -> Result<PointCloud> {
        parse(text, Path::new("test.xyz"))
    }

    #[test]
    fn plain_3d() {
        let c = p("0 0 0\n1 0 0\n").unwrap();
        assert_eq!((c.len(), c.dim()), (2, 3));
        assert!(c.labels().is_none());
    }

    #[test]
    fn labelled_3d_with_comments() {
        let c = p("# header\n0 0 0 3\n\n1 0 0 1 # trailing\n").unwrap();
        assert_eq!(c.labels().unwrap(), &[3, 1]);
    }

    #[test]
    fn two_dim_with_directive() {
        let c = p("# dim=2\n0.5 1 7\n2 3 0\n").unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.points()[0], [0.5, 1.0, 0.0]);
        assert_eq!(c.labels().unwrap(), &[7, 0]);
        assert_eq!(p("1 2\n3 4\n").unwrap().dim(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match p("0 0 0\n1 x 0\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match p("0 0 0\n1 0\n") {
            Err(Error::Parse {
                line: 2, message, ..
            }) => assert!(message.contains("mixed")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p("0 0 0 -1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(p("0 0 0 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(p("# only comments\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            p("# dim=5\n0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn missing_file_is_io() {
        assert!(matches!(
            load_point_cloud("/nonexistent/dir/file.xyz"),
            Err(Error::Io { .. })
        ));
    }

    fn arb_cloud() -> impl Strategy<Value = PointCloud> {
        (
            2usize..=3,
            prop::collection::vec(
                prop::array::uniform3(
                    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO,
                ),
                1..40,
            ),
            any::<bool>(),
        )
            .prop_filter_map("valid cloud", |(dim, mut pts, lab)| {
                if dim == 2 {
                    pts.iter_mut().for_each(|p| p[2] = 0.0);
                }
                let labels = lab.then(|| (0..pts.len()).map(|i| i * 7 % 5).collect());
                PointCloud::new(dim, pts, labels).ok()
            })
    }

    proptest! {
        #[test]
        fn round_trip_exact(cloud in arb_cloud()) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("cloud.xyz");
            save_point_cloud(&cloud, &path).unwrap();
            let back = load_point_cloud(&path).unwrap();
            prop_assert_eq!(back, cloud);
        }
    }
}
