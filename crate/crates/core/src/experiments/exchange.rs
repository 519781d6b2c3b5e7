use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::output::{Cell, Table};
use crate::graph::{Parameters, RegularGraph};
use crate::resampling::{exchange_pairs, exchange_report, ExchangeReport, ExchangeSample};
use crate::resolvent::NormalizedAdjacency;
use crate::sampler::SamplerConfig;

/// Graph statistics available to the exchangeability experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Lambda2,
    Triangles,
    /// Indicator of the edge `{0, 1}`.
    Edge01,
    /// Degree of vertex 0 (a constant).
    Degree0,
}

impl Statistic {
    pub fn eval(self, g: &RegularGraph) -> f64 {
        match self {
            Statistic::Lambda2 => NormalizedAdjacency::<f64>::new(g.clone())
                .eigenvalues()
                .map(|ev| ev[1])
                .unwrap_or(f64::NAN),
            Statistic::Triangles => g.triangle_count() as f64,
            Statistic::Edge01 => f64::from(u8::from(g.has_edge(0, 1))),
            Statistic::Degree0 => g.neighbors(0).len() as f64,
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda2" => Ok(Statistic::Lambda2),
            "triangles" => Ok(Statistic::Triangles),
            "edge01" => Ok(Statistic::Edge01),
            "degree0" => Ok(Statistic::Degree0),
            _ => Err(Error::Validation(vec![format!(
                "unknown statistic {s:?} (expected lambda2, triangles, edge01 or degree0)"
            )])),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Lambda2 => "lambda2",
            Statistic::Triangles => "triangles",
            Statistic::Edge01 => "edge01",
            Statistic::Degree0 => "degree0",
        })
    }
}

pub fn exchange_experiment(
    cfg: &SamplerConfig,
    params: &Parameters,
    statistic: Statistic,
    m: usize,
) -> Result<(Vec<ExchangeSample>, ExchangeReport)> {
    let rows = exchange_pairs(cfg, params, |g| statistic.eval(g), m)?;
    let report = exchange_report(&rows);
    Ok((rows, report))
}

pub fn exchange_table(n: usize, d: usize, statistic: Statistic, rows: &[ExchangeSample]) -> Table {
    let mut t = Table::new(&["n", "d", "statistic", "sample", "center", "before", "after", "switched", "regular"]);
    for r in rows {
        t.push(vec![
            Cell::from(n),
            d.into(),
            Cell::Text(statistic.to_string()),
            r.sample.into(),
            r.center.into(),
            r.before.into(),
            r.after.into(),
            r.switched.into(),
            r.regular.into(),
        ]);
    }
    t
}
