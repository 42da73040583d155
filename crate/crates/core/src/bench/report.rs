//! Averaging sweep records and writing them as CSV.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::sweep::SweepRecord;
use super::Tercile;
use crate::error::{Error, Result};
use crate::initsel::Strategy;

/// Means over one (tercile, strategy, tolerance) group. Rank means cover the
/// converged runs only; `mean_svd` covers every run since the oracle does
/// not depend on convergence.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub tercile: Tercile,
    pub strategy: Strategy,
    pub eps_star: f64,
    pub converged: usize,
    pub failures: usize,
    pub mean_r0: Option<f64>,
    pub mean_r1: Option<f64>,
    pub mean_r2: Option<f64>,
    pub mean_svd: f64,
}

/// Groups are ordered by tercile, then tolerance loosest first, then
/// strategy.
pub fn aggregate_means(records: &[SweepRecord]) -> Vec<Aggregate> {
    let mut groups: BTreeMap<(Tercile, u64, Strategy), Vec<&SweepRecord>> = BTreeMap::new();
    for r in records {
        // descending tolerance: larger eps gets the smaller key
        let key = u64::MAX - r.eps_star.to_bits();
        groups
            .entry((r.tercile, key, r.strategy))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((tercile, _, strategy), recs)| {
            let ok: Vec<&&SweepRecord> = recs.iter().filter(|r| r.converged).collect();
            let mean = |f: &dyn Fn(&SweepRecord) -> f64| -> Option<f64> {
                (!ok.is_empty()).then(|| ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64)
            };
            Aggregate {
                tercile,
                strategy,
                eps_star: recs[0].eps_star,
                converged: ok.len(),
                failures: recs.len() - ok.len(),
                mean_r0: mean(&|r| r.r0_achieved as f64),
                mean_r1: mean(&|r| r.r1 as f64),
                mean_r2: mean(&|r| r.r2.unwrap_or(0) as f64),
                mean_svd: recs.iter().map(|r| r.svd_rank as f64).sum::<f64>() / recs.len() as f64,
            }
        })
        .collect()
}

/// Six significant digits in the style of C's `%g`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn header() -> Vec<String> {
    let mut h = vec!["Error".to_string()];
    for q in ["r0", "r1", "r2"] {
        h.extend(Strategy::ALL.iter().map(|s| format!("{q}-{}", s.label())));
    }
    h.push("SVD".into());
    h.extend(Strategy::ALL.iter().map(|s| format!("fail-{}", s.label())));
    h
}

fn io_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

/// One row per tolerance, loosest first. Cells of strategies that were not
/// run, or whose runs all failed, are empty. The aggregates must come from
/// a single tercile.
pub fn write_csv(aggregates: &[Aggregate], path: &Path) -> Result<()> {
    if let Some(first) = aggregates.first() {
        if aggregates.iter().any(|a| a.tercile != first.tercile) {
            return Err(Error::InvalidConfig(
                "one CSV table holds a single tercile".into(),
            ));
        }
    }
    let mut rows: Vec<(f64, Vec<&Aggregate>)> = Vec::new();
    for a in aggregates {
        match rows.iter_mut().find(|(e, _)| *e == a.eps_star) {
            Some((_, v)) => v.push(a),
            None => rows.push((a.eps_star, vec![a])),
        }
    }
    rows.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut w = csv::Writer::from_path(path).map_err(io_err(path))?;
    w.write_record(header()).map_err(io_err(path))?;
    for (eps, group) in &rows {
        let by = |s: Strategy| group.iter().find(|a| a.strategy == s);
        let cell = |v: Option<f64>| v.map(format_sig6).unwrap_or_default();
        let mut rec = vec![format_sig6(*eps)];
        for q in 0..3 {
            for s in Strategy::ALL {
                rec.push(cell(
                    by(s).and_then(|a| [a.mean_r0, a.mean_r1, a.mean_r2][q]),
                ));
            }
        }
        rec.push(format_sig6(group[0].mean_svd));
        for s in Strategy::ALL {
            rec.push(by(s).map(|a| a.failures.to_string()).unwrap_or_default());
        }
        w.write_record(&rec).map_err(io_err(path))?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Writes `<stem>_near.csv`, `<stem>_mid.csv` and `<stem>_far.csv`.
pub fn write_tercile_csvs(aggregates: &[Aggregate], stem: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for t in Tercile::ALL {
        let mut name = stem.file_name().unwrap_or_default().to_os_string();
        name.push(format!("_{t}.csv"));
        let path = stem.with_file_name(name);
        let subset: Vec<Aggregate> = aggregates
            .iter()
            .filter(|a| a.tercile == t)
            .cloned()
            .collect();
        write_csv(&subset, &path)?;
        paths.push(path);
    }
    Ok(paths)
}

/// One line per record, floats in shortest round-trip form.
pub fn write_records_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(io_err(path))?;
    w.write_record([
        "i",
        "j",
        "dr",
        "tercile",
        "strategy",
        "eps_star",
        "r0_requested",
        "r0_achieved",
        "r1",
        "r2",
        "svd_rank",
        "achieved_error",
        "recompressed_error",
        "passes",
        "converged",
    ])
    .map_err(io_err(path))?;
    for r in records {
        w.write_record([
            r.i.to_string(),
            r.j.to_string(),
            r.dr.to_string(),
            r.tercile.to_string(),
            r.strategy.to_string(),
            r.eps_star.to_string(),
            r.r0_requested.to_string(),
            r.r0_achieved.to_string(),
            r.r1.to_string(),
            r.r2.map(|v| v.to_string()).unwrap_or_default(),
            r.svd_rank.to_string(),
            r.achieved_error.to_string(),
            r.recompressed_error
                .map(|v| v.to_string())
                .unwrap_or_default(),
            r.passes.to_string(),
            r.converged.to_string(),
        ])
        .map_err(io_err(path))?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(strategy: Strategy, eps_star: f64, r1: usize, converged: bool) -> SweepRecord {
        SweepRecord {
            i: 0,
            j: 1,
            dr: 2.0,
            tercile: Tercile::Near,
            strategy,
            eps_star,
            r0_requested: r1 + 2,
            r0_achieved: r1 + 1,
            r1,
            r2: converged.then_some(r1.saturating_sub(1)),
            svd_rank: r1.saturating_sub(2),
            achieved_error: if converged { eps_star / 2.0 } else { 1.0 },
            recompressed_error: None,
            passes: 3,
            converged,
        }
    }

    #[test]
    fn sig6_matches_printf_g() {
        let cases = [
            (1e-3, "0.001"),
            (1e-4, "0.0001"),
            (1e-5, "1e-05"),
            (1e-10, "1e-10"),
            (5.0, "5"),
            (12.5, "12.5"),
            (1.0 / 3.0, "0.333333"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (999999.5, "1e+06"),
            (-2.5e-7, "-2.5e-07"),
            (0.0, "0"),
        ];
        for (x, s) in cases {
            assert_eq!(format_sig6(x), s, "{x}");
        }
    }

    #[test]
    fn single_record_means() {
        let a = aggregate_means(&[rec(Strategy::Mdv, 1e-6, 7, true)]);
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].mean_r1, Some(7.0));
        assert_eq!(a[0].mean_r0, Some(8.0));
        assert_eq!(a[0].mean_r2, Some(6.0));
        assert_eq!(a[0].mean_svd, 5.0);
    }

    #[test]
    fn two_record_mean_and_failures() {
        let a = aggregate_means(&[
            rec(Strategy::Mdv, 1e-6, 4, true),
            rec(Strategy::Mdv, 1e-6, 6, true),
        ]);
        assert_eq!(a[0].mean_r1, Some(5.0));
        let recs = [
            rec(Strategy::Sphere, 1e-6, 4, true),
            rec(Strategy::Sphere, 1e-6, 90, false),
            rec(Strategy::Sphere, 1e-6, 8, true),
            rec(Strategy::Sphere, 1e-6, 70, false),
        ];
        let a = aggregate_means(&recs);
        // recount
        let ok: Vec<_> = recs.iter().filter(|r| r.converged).collect();
        assert_eq!(a[0].converged, ok.len());
        assert_eq!(a[0].failures, recs.len() - ok.len());
        assert_eq!(
            a[0].mean_r1,
            Some(ok.iter().map(|r| r.r1 as f64).sum::<f64>() / ok.len() as f64)
        );
        let all_failed = aggregate_means(&recs[1..2]);
        assert_eq!((all_failed[0].mean_r1, all_failed[0].failures), (None, 1));
    }

    #[test]
    fn groups_ordered_loosest_first() {
        let recs = [
            rec(Strategy::Random, 1e-6, 4, true),
            rec(Strategy::Mdv, 1e-3, 2, true),
            rec(Strategy::Mdv, 1e-6, 3, true),
        ];
        let a = aggregate_means(&recs);
        let keys: Vec<_> = a.iter().map(|g| (g.eps_star, g.strategy)).collect();
        assert_eq!(
            keys,
            vec![
                (1e-3, Strategy::Mdv),
                (1e-6, Strategy::Mdv),
                (1e-6, Strategy::Random)
            ]
        );
    }

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&[], &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert_eq!(
            text.trim_end(),
            "Error,r0-Chebyshev,r0-sphere,r0-MDV,r0-random,r1-Chebyshev,r1-sphere,r1-MDV,r1-random,\
             r2-Chebyshev,r2-sphere,r2-MDV,r2-random,SVD,fail-Chebyshev,fail-sphere,fail-MDV,fail-random"
        );
    }

    #[test]
    fn table_round_trips_to_printed_precision() {
        let recs = [
            rec(Strategy::Mdv, 1e-3, 3, true),
            rec(Strategy::Mdv, 1e-3, 4, true),
            rec(Strategy::Mdv, 1e-3, 4, true),
            rec(Strategy::Mdv, 1e-6, 11, true),
            rec(Strategy::Sphere, 1e-6, 50, false),
        ];
        let aggs = aggregate_means(&recs);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&aggs, &p).unwrap();
        let mut rd = csv::Reader::from_path(&p).unwrap();
        let head = rd.headers().unwrap().clone();
        let col = |name: &str| head.iter().position(|h| h == name).unwrap();
        let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(&rows[0][col("Error")], "0.001");
        let r1: f64 = rows[0][col("r1-MDV")].parse().unwrap();
        assert!((r1 - 11.0 / 3.0).abs() <= 5e-6 * r1);
        assert_eq!(&rows[0][col("r1-sphere")], "");
        assert_eq!(&rows[0][col("fail-sphere")], "");
        assert_eq!(&rows[1][col("r0-sphere")], "");
        assert_eq!(&rows[1][col("fail-sphere")], "1");
        assert_eq!(&rows[1][col("r1-Chebyshev")], "");
        let svd: f64 = rows[1][col("SVD")].parse().unwrap();
        assert_eq!(
            svd,
            aggs.iter().find(|a| a.eps_star == 1e-6).unwrap().mean_svd
        );
    }

    #[test]
    fn tercile_files_are_named_by_stem() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_tercile_csvs(
            &aggregate_means(&[rec(Strategy::Mdv, 1e-3, 3, true)]),
            &dir.path().join("out"),
        )
        .unwrap();
        let names: Vec<_> = paths
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap().to_string())
            .collect();
        assert_eq!(names, vec!["out_near.csv", "out_mid.csv", "out_far.csv"]);
        assert_eq!(
            std::fs::read_to_string(&paths[0]).unwrap().lines().count(),
            2
        );
        assert_eq!(
            std::fs::read_to_string(&paths[2]).unwrap().lines().count(),
            1
        );
    }
}
