//! Trace files: `#`-prefixed `key=value` metadata lines followed by a CSV
//! table with one row per iteration.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Problem;

use super::{Iterate, RunResult, Status, Trace};

pub const TRACE_MAGIC: &str = "bpvp-trace v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub i: usize,
    pub j: usize,
    pub x: usize,
    pub f: f64,
    pub set_size: usize,
    pub eps: f64,
    pub delta_j: f64,
    pub slack_used: f64,
    /// `ρ(x_{i+1}, x_i)`; empty on the last row.
    pub rho_next: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceMeta {
    pub problem: String,
    pub gauge: String,
    pub horizon: String,
    pub status: Status,
    pub xbar: usize,
    pub final_diam_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceFile {
    pub meta: TraceMeta,
    pub rows: Vec<TraceRow>,
}

impl TraceFile {
    pub fn from_run(result: &RunResult, problem: &str, gauge: &str, horizon: &str) -> Self {
        let its = &result.trace.iterates;
        let rows = its
            .iter()
            .enumerate()
            .map(|(k, it)| TraceRow {
                i: it.index,
                j: it.j,
                x: it.point,
                f: it.value,
                set_size: it.set_size,
                eps: it.eps,
                delta_j: it.delta_j,
                slack_used: it.slack_used,
                rho_next: result.trace.rho_chain.get(k).copied(),
            })
            .collect();
        TraceFile {
            meta: TraceMeta {
                problem: problem.to_string(),
                gauge: gauge.to_string(),
                horizon: horizon.to_string(),
                status: result.status,
                xbar: result.xbar,
                final_diam_bound: result.final_diam_bound,
            },
            rows,
        }
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let m = &self.meta;
        let mut out = format!(
            "# {TRACE_MAGIC}\n# problem={}\n# gauge={}\n# horizon={}\n# status={}\n# xbar={}\n# final_diam_bound={}\n",
            m.problem, m.gauge, m.horizon, m.status, m.xbar, m.final_diam_bound
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { path: origin.to_string(), line, msg };
        let mut kv = BTreeMap::new();
        let mut saw_magic = false;
        for (no, line) in text.lines().enumerate() {
            let Some(rest) = line.strip_prefix('#') else { continue };
            let rest = rest.trim();
            if rest == TRACE_MAGIC {
                saw_magic = true;
            } else if let Some((k, v)) = rest.split_once('=') {
                kv.insert(k.trim().to_string(), (no + 1, v.trim().to_string()));
            }
        }
        if !saw_magic {
            return Err(perr(1, format!("missing '# {TRACE_MAGIC}' header")));
        }
        let get = |k: &str| -> Result<&(usize, String)> {
            kv.get(k).ok_or_else(|| perr(1, format!("missing metadata key {k:?}")))
        };
        let parse_num = |k: &str| -> Result<f64> {
            let (no, v) = get(k)?;
            v.parse().map_err(|_| perr(*no, format!("bad {k} value {v:?}")))
        };
        let meta = TraceMeta {
            problem: get("problem")?.1.clone(),
            gauge: get("gauge")?.1.clone(),
            horizon: get("horizon")?.1.clone(),
            status: {
                let (no, v) = get("status")?;
                v.parse().map_err(|_| perr(*no, format!("bad status {v:?}")))?
            },
            xbar: parse_num("xbar")? as usize,
            final_diam_bound: parse_num("final_diam_bound")?,
        };
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let rows = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<TraceRow>, _>>()
            .map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                perr(line, e.to_string())
            })?;
        if rows.is_empty() {
            return Err(perr(1, "trace has no rows".into()));
        }
        Ok(TraceFile { meta, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?)?;
        Ok(())
    }

    /// Rebuilds a run result from the recorded rows. Only structural
    /// problems are errors here; recorded values are taken as-is and are
    /// re-checked against the problem by the certificate.
    pub fn to_run_result(&self, problem: &Problem) -> Result<RunResult> {
        let n = problem.space.len();
        for (k, row) in self.rows.iter().enumerate() {
            if row.i != k {
                return Err(Error::TraceMismatch(format!("row {k} has index {}", row.i)));
            }
            if row.x >= n {
                return Err(Error::TraceMismatch(format!(
                    "row {k}: point {} outside a space of {n} points",
                    row.x
                )));
            }
        }
        let last = self.rows.last().expect("nonempty");
        if self.meta.xbar != last.x {
            return Err(Error::TraceMismatch(format!(
                "xbar = {} but the last iterate is {}",
                self.meta.xbar, last.x
            )));
        }
        let iterates = self
            .rows
            .iter()
            .map(|r| Iterate {
                index: r.i,
                point: r.x,
                j: r.j,
                value: r.f,
                members: Vec::new(),
                set_size: r.set_size,
                eps: r.eps,
                delta_j: r.delta_j,
                slack_used: r.slack_used,
            })
            .collect();
        let rho_chain = self.rows[..self.rows.len() - 1]
            .iter()
            .map(|r| r.rho_next.unwrap_or(f64::NAN))
            .collect();
        Ok(RunResult {
            xbar: last.x,
            trace: Trace { iterates, rho_chain, rho_to_limit: Vec::new() },
            status: self.meta.status,
            final_diam_bound: self.meta.final_diam_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{fixture_by_name, problem_by_name};
    use crate::solver::{run, ExhaustiveOracle};
    use proptest::prelude::*;

    fn p3_trace() -> (Problem, TraceFile) {
        let fx = fixture_by_name("P3").unwrap();
        let g = fx.gauge.build().unwrap();
        let r = run(&fx.problem, &g, &fx.schedule, &mut ExhaustiveOracle).unwrap();
        (fx.problem, TraceFile::from_run(&r, "P3", "d", "1"))
    }

    #[test]
    fn p3_trace_text() {
        let (_, tf) = p3_trace();
        let s = tf.to_csv_string().unwrap();
        let expected = "# bpvp-trace v1\n# problem=P3\n# gauge=d\n# horizon=1\n# status=singleton-early\n\
# xbar=2\n# final_diam_bound=0\n\
i,j,x,f,set_size,eps,delta_j,slack_used,rho_next\n\
0,0,0,1.0,3,4.0,0.5,0.0,2.0\n\
1,0,2,0.0,1,2.0,0.5,0.0,\n";
        assert_eq!(s, expected);
    }

    #[test]
    fn rejects_structural_mismatch() {
        let (pr, mut tf) = p3_trace();
        tf.rows[1].x = 9;
        assert!(matches!(tf.to_run_result(&pr), Err(Error::TraceMismatch(_))));
        let (pr, mut tf) = p3_trace();
        tf.meta.xbar = 1;
        assert!(tf.to_run_result(&pr).is_err());
        assert!(TraceFile::parse("i,j\n", "t").is_err());
        let plateau = problem_by_name("PLATEAU").unwrap();
        let (_, tf) = p3_trace();
        assert!(tf.to_run_result(&plateau).is_ok());
    }

    proptest! {
        #[test]
        fn csv_round_trip(seed in 0u64..200) {
            let fx = fixture_by_name(&format!("RANDOM-{seed}")).unwrap();
            let g = fx.gauge.build().unwrap();
            let r = run(&fx.problem, &g, &fx.schedule, &mut ExhaustiveOracle).unwrap();
            let tf = TraceFile::from_run(&r, &fx.name, "d", "1");
            let back = TraceFile::parse(&tf.to_csv_string().unwrap(), "mem").unwrap();
            prop_assert_eq!(&back, &tf);
            let rr = back.to_run_result(&fx.problem).unwrap();
            prop_assert_eq!(rr.trace.points(), r.trace.points());
            prop_assert_eq!(rr.trace.rho_chain, r.trace.rho_chain);
        }
    }
}
