//! `(n, x)` value tables of the function families.

use std::str::FromStr;

use leonard_trio::limits::{H1Params, R1Params};
use leonard_trio::suites::{r3_from_trio, Mode};
use leonard_trio::trio::build_realization;
use leonard_trio::wilson::WilsonParams;
use leonard_trio::{ParameterSet, Result, Scalar};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    QRacah,
    Wilson,
    Overlap,
    OverlapPartner,
    R1,
    R1Sum,
    H1,
    R3,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "qracah" => Family::QRacah,
            "wilson" => Family::Wilson,
            "w" => Family::Overlap,
            "w-partner" => Family::OverlapPartner,
            "r1" => Family::R1,
            "r1-sum" => Family::R1Sum,
            "h1" => Family::H1,
            "r3" => Family::R3,
            other => {
                return Err(CliError::Config(format!(
                    "unknown function {other:?}; expected qracah, wilson, w, w-partner, r1, r1-sum, h1 or r3"
                )))
            }
        })
    }
}

/// `grid[n][x]` for `0 <= n, x <= N`.
pub fn evaluate(family: Family, ps: &ParameterSet) -> Result<Vec<Vec<Scalar>>> {
    let nn = ps.n;
    let fill = |f: &dyn Fn(usize, usize) -> Result<Scalar>| -> Result<Vec<Vec<Scalar>>> {
        (0..=nn)
            .map(|n| (0..=nn).map(|x| f(n, x)).collect())
            .collect()
    };
    match family {
        Family::QRacah => {
            let rho = ps.rho()?;
            fill(&|n, x| rho.eval(n, x))
        }
        Family::Wilson => {
            let wp = WilsonParams::from_trio(ps)?;
            fill(&|n, x| wp.eval(n, x))
        }
        Family::Overlap => {
            let tr = build_realization(ps)?;
            fill(&|n, x| Ok(tr.overlap_w(n, x)))
        }
        Family::OverlapPartner => {
            let tr = build_realization(ps)?;
            fill(&|n, x| Ok(tr.overlap_w_partner(n, x)))
        }
        Family::R1 => {
            let r1 = R1Params::from_trio(ps)?;
            fill(&|n, x| r1.eval(n, x))
        }
        Family::R1Sum => {
            let r1 = R1Params::from_trio(ps)?;
            fill(&|n, x| r1.sum_route(n, x))
        }
        Family::H1 => {
            let h1 = H1Params::from_trio(ps)?;
            fill(&|n, x| h1.eval(n, x))
        }
        Family::R3 => {
            let r3 = r3_from_trio(ps)?;
            fill(&|n, x| r3.eval(n, x))
        }
    }
}

/// CSV with columns `n, x, value`; float mode rounds the exact values.
pub fn render_csv(grid: &[Vec<Scalar>], mode: Mode) -> std::result::Result<String, CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "x", "value"]).map_err(io)?;
    for (n, row) in grid.iter().enumerate() {
        for (x, v) in row.iter().enumerate() {
            let text = match mode {
                Mode::Exact => v.to_string(),
                Mode::Float(bits) => v.to_float(bits).to_string(),
            };
            w.write_record([n.to_string(), x.to_string(), text])
                .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
