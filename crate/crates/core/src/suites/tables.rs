//! Convergence tables.

use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::eval::{lambda_of, test_function_of};
use super::Config;
use crate::dunkl_poly::{DunklContext, Intertwiner};
use crate::error::{DunklError, Result};
use crate::numeric::{mehta_closed_form, DunklTransform, Frame, KernelEvaluator, KernelStrategy, QuadratureGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    MehtaConvergence,
    PlancherelConvergence,
    KernelTruncation,
}

impl FromStr for TableKind {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mehta_convergence" => Ok(TableKind::MehtaConvergence),
            "plancherel_convergence" => Ok(TableKind::PlancherelConvergence),
            "kernel_truncation" => Ok(TableKind::KernelTruncation),
            other => Err(DunklError::Config(format!("unknown table {other:?}"))),
        }
    }
}

impl TableKind {
    pub fn name(&self) -> &'static str {
        match self {
            TableKind::MehtaConvergence => "mehta_convergence",
            TableKind::PlancherelConvergence => "plancherel_convergence",
            TableKind::KernelTruncation => "kernel_truncation",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    /// Resolution or truncation degree.
    pub param: usize,
    pub value: Complex64,
    pub error: f64,
    /// Error bound for the row, when one is known.
    pub bound: Option<f64>,
    /// Monotone decrease (or bound respected) at this row.
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub kind: TableKind,
    pub system: String,
    pub rows: Vec<TableRow>,
    pub pass: bool,
}

impl Table {
    fn new(kind: TableKind, system: String, rows: Vec<TableRow>) -> Self {
        let pass = rows.iter().all(|r| r.ok);
        Table {
            kind,
            system,
            rows,
            pass,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,value_re,value_im,error,bound,ok\n");
        for r in &self.rows {
            let bound = r.bound.map(|b| format!("{b:.6e}")).unwrap_or_default();
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.6e},{},{}\n",
                r.param, r.value.re, r.value.im, r.error, bound, r.ok
            ));
        }
        s
    }
}

/// Marks each row `ok` when its error decreased strictly or both errors are
/// below the floor.
fn flag_monotone(rows: &mut [TableRow], floor: f64) {
    for i in 1..rows.len() {
        let (a, b) = (rows[i - 1].error, rows[i].error);
        rows[i].ok = b < a || (a <= floor && b <= floor);
    }
}

pub fn emit_table(kind: TableKind, cfg: &Config) -> Result<Table> {
    let (rs, k) = cfg.root_system.build()?;
    let system = super::label(&cfg.root_system)?;
    let tb = &cfg.tables;
    let rows = match kind {
        TableKind::MehtaConvergence => {
            let frame = Frame::new(&rs, &k)?;
            let exact = mehta_closed_form(&rs, &k)?;
            let mut rows = tb
                .mehta_resolutions
                .iter()
                .map(|&n| {
                    let g = QuadratureGrid::symmetric(&frame, tb.half_width, n)?;
                    let v = g.integrate(|x| (-0.5 * x.iter().map(|t| t * t).sum::<f64>()).exp());
                    Ok(TableRow {
                        param: n,
                        value: Complex64::new(v, 0.0),
                        error: (v - exact).abs() / exact,
                        bound: None,
                        ok: true,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            flag_monotone(&mut rows, tb.floor);
            rows
        }
        TableKind::PlancherelConvergence => {
            let tr = DunklTransform::new(&rs, &k, cfg.kernel.clone())?;
            let phi = test_function_of(cfg, rs.ambient_dim())?;
            let top = tb.plancherel_resolutions.iter().copied().max().unwrap_or(16);
            let reference = tr.grid(tb.half_width, 2 * top)?;
            let norm = reference.sample(|x| phi.eval_complex(x)).norm_l2();
            let mut rows = tb
                .plancherel_resolutions
                .iter()
                .map(|&n| {
                    let g = tr.grid(tb.half_width, n)?;
                    let f = g.sample(|x| phi.eval_complex(x));
                    let v = tr.forward(&f, &g)?.norm_l2();
                    Ok(TableRow {
                        param: n,
                        value: Complex64::new(v, 0.0),
                        error: (v - norm).abs() / norm,
                        bound: None,
                        ok: true,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            flag_monotone(&mut rows, tb.floor);
            rows
        }
        TableKind::KernelTruncation => {
            let dim = rs.ambient_dim();
            let lambda = lambda_of(cfg, dim)?;
            let x = if tb.x.is_empty() {
                let mut e = vec![0.0; dim];
                e[0] = 1.0;
                e
            } else if tb.x.len() == dim {
                tb.x.clone()
            } else {
                return Err(DunklError::Config(format!("tables.x needs {dim} coordinates")));
            };
            let oracle = KernelEvaluator::new(&rs, &k, KernelStrategy::Auto)?.eval(&lambda, &x)?;
            let top = tb.truncations.iter().copied().max().unwrap_or(0);
            let tw = Intertwiner::build(&DunklContext::new(&rs, &k), top)?;
            tb.truncations
                .iter()
                .map(|&n| {
                    let v = tw.kernel_series_complex(&lambda, &x, n)?;
                    let err = (v.value - oracle.value).norm();
                    let bound = v.tail_bound() + oracle.error_bound;
                    Ok(TableRow {
                        param: n,
                        value: v.value,
                        error: err,
                        bound: Some(bound),
                        ok: err <= bound,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(Table::new(kind, system, rows))
}
