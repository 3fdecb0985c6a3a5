//! Parameter grids and CSV output for sweeps of [`check_main_theorem_instance`].

use std::io::Write;

use crate::error::{Error, Result};
use crate::expansion::ExpanderParams;
use crate::generators::FamilySpec;
use crate::reductions::{check_main_theorem_instance, CheckOptions, InstanceReport};

/// Values closer than this to `stop` count as `stop` and are excluded.
const GRID_STOP_TOL: f64 = 1e-9;

/// Parses `start:stop:step` (start inclusive, stop exclusive), a comma list,
/// or a single value.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad grid {text:?}"));
    let parse = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if step.is_nan() || step <= 0.0 {
                return Err(bad());
            }
            let mut out = Vec::new();
            for i in 0usize.. {
                let v = start + i as f64 * step;
                if v >= stop - GRID_STOP_TOL {
                    break;
                }
                out.push(v);
            }
            Ok(out)
        }
        [_] => text.split(',').map(parse).collect(),
        _ => Err(bad()),
    }
}

/// Like [`parse_grid`] but every value must be a nonnegative integer.
pub fn parse_int_grid(text: &str) -> Result<Vec<usize>> {
    parse_grid(text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidArgument(format!("{v} in {text:?} is not a nonnegative integer")))
            }
        })
        .collect()
}

/// Family instances × ε values, family-major.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub families: Vec<FamilySpec>,
    pub epsilons: Vec<f64>,
    pub params: ExpanderParams,
    pub options: CheckOptions,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<InstanceReport>> {
    let mut rows = Vec::with_capacity(spec.families.len() * spec.epsilons.len());
    for family in &spec.families {
        let ps = family.generate()?;
        for &eps in &spec.epsilons {
            rows.push(check_main_theorem_instance(&ps, eps, &spec.params, &spec.options)?);
        }
    }
    Ok(rows)
}

pub fn write_reports_csv<W: Write>(out: W, rows: &[InstanceReport]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(InstanceReport::CSV_HEADER)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn reports_to_csv(rows: &[InstanceReport]) -> String {
    let mut buf = Vec::new();
    write_reports_csv(&mut buf, rows).expect("in-memory CSV");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn read_reports_csv(text: &str) -> Result<Vec<InstanceReport>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::Verdict;

    #[test]
    fn grid_excludes_stop() {
        let g = parse_grid("0.1:2.0:0.1").unwrap();
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 0.1);
        assert!((g[18] - 1.9).abs() < 1e-12);
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(parse_grid("0.5,1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_grid("3").unwrap(), vec![3.0]);
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("x").is_err());
        assert_eq!(parse_int_grid("8:25:8").unwrap(), vec![8, 16, 24]);
        assert!(parse_int_grid("0.5").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            InstanceReport::new(16, 4.0, 0.25, 2.0, 1, Verdict::Expander),
            InstanceReport::new(16, 1.0, 0.25, 2.0, 1, Verdict::NotExpander),
        ];
        let text = reports_to_csv(&rows);
        assert!(text.starts_with("n,epsilon,alpha,beta,k,verdict,ratio\n16,4.0,0.25,2.0,1,expander,"));
        assert_eq!(read_reports_csv(&text).unwrap(), rows);
    }
}
