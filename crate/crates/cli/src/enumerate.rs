//! Exhaustive table over all `x` with `ℓ(x) ≤ bound`.
//!
//! CSV columns, in order:
//! `x,length,kappa_x,v,mu,w,eta,phi_x,W_x,shrunken,full_support,nonempty,rule,oracle,agree`.
//! List-valued cells are `;`-separated; `oracle` and `agree` are empty when
//! the oracle does not apply (partial affine σ-support).

use adlv_core::criterion::Setting;
use adlv_core::iwahori::{AffineElement, KottwitzClass};
use adlv_core::notation;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::{pool, to_json, CliError, Outcome};

pub const CSV_COLUMNS: [&str; 15] = [
    "x",
    "length",
    "kappa_x",
    "v",
    "mu",
    "w",
    "eta",
    "phi_x",
    "W_x",
    "shrunken",
    "full_support",
    "nonempty",
    "rule",
    "oracle",
    "agree",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub x: String,
    pub length: usize,
    pub kappa_x: Vec<String>,
    pub v: String,
    pub mu: Vec<i64>,
    pub w: String,
    pub eta: String,
    pub phi_x: Vec<Vec<i32>>,
    #[serde(rename = "W_x")]
    pub w_x: Vec<String>,
    pub shrunken: bool,
    pub full_support: bool,
    pub nonempty: bool,
    pub rule: String,
    pub oracle: Option<bool>,
    pub agree: Option<bool>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    x: &'a str,
    length: usize,
    kappa_x: String,
    v: &'a str,
    mu: String,
    w: &'a str,
    eta: &'a str,
    phi_x: String,
    #[serde(rename = "W_x")]
    w_x: String,
    shrunken: bool,
    full_support: bool,
    nonempty: bool,
    rule: &'a str,
    oracle: Option<bool>,
    agree: Option<bool>,
}

impl Row {
    fn csv(&self) -> CsvRow<'_> {
        CsvRow {
            x: &self.x,
            length: self.length,
            kappa_x: self.kappa_x.join(";"),
            v: &self.v,
            mu: notation::format_ints(&self.mu),
            w: &self.w,
            eta: &self.eta,
            phi_x: self
                .phi_x
                .iter()
                .map(|r| notation::format_ints(&r.iter().map(|c| *c as i64).collect::<Vec<_>>()))
                .collect::<Vec<_>>()
                .join(";"),
            w_x: self.w_x.join(";"),
            shrunken: self.shrunken,
            full_support: self.full_support,
            nonempty: self.nonempty,
            rule: &self.rule,
            oracle: self.oracle,
            agree: self.agree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateDocument {
    pub system: String,
    pub sigma: String,
    pub kappa_b: String,
    pub length_bound: usize,
    pub count: usize,
    pub disagreements: usize,
    pub rows: Vec<Row>,
}

fn row(st: &Setting, x: &AffineElement, kappa: &KottwitzClass) -> Result<Row, CliError> {
    let g = st.group();
    let sys = g.sys();
    let p = st.profile(x)?;
    let verdict = st.decide_nonempty(x, kappa)?;
    let full_support = g.affine_sigma_support(x, st.sigma()).full;
    let oracle = if full_support {
        Some(st.oracle_nonempty(x, kappa)?.nonempty)
    } else {
        None
    };
    Ok(Row {
        x: notation::format_affine(g, x),
        length: g.length(x),
        kappa_x: notation::format_qs(&st.kottwitz(x).coinvariant),
        v: notation::format_finite(sys, &p.v_x),
        mu: p.mu_x.clone(),
        w: notation::format_finite(sys, &p.w_x),
        eta: notation::format_finite(sys, &p.eta),
        phi_x: p.phi_x.iter().map(|r| r.0.clone()).collect(),
        w_x: p.w_x_set.iter().map(|w| notation::format_finite(sys, w)).collect(),
        shrunken: p.shrunken,
        full_support,
        nonempty: verdict.nonempty,
        rule: verdict.rule.as_str().into(),
        oracle,
        agree: oracle.map(|o| o == verdict.nonempty),
    })
}

/// Rows for every enumerated `x` whose class matches `b`, in (length, element) order.
pub fn enumerate_rows(cfg: &RunConfig, st: &Setting) -> Result<Vec<Row>, CliError> {
    let fixed = cfg.fixed_kappa(st)?;
    let xs: Vec<AffineElement> = st
        .group()
        .enumerate(cfg.length_bound, cfg.cap)?
        .into_iter()
        .filter(|x| {
            fixed
                .as_ref()
                .is_none_or(|k| st.kottwitz(x).coinvariant == k.coinvariant)
        })
        .collect();
    let mut keyed: Vec<(usize, AffineElement, Row)> = pool(cfg.jobs)?.install(|| {
        xs.par_iter()
            .map(|x| {
                let kappa = cfg.kappa_for(st, &fixed, x);
                row(st, x, &kappa).map(|r| (r.length, x.clone(), r))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(keyed.into_iter().map(|(_, _, r)| r).collect())
}

pub fn cmd_enumerate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = cfg.format_for(Format::Json, &[Format::Json, Format::Csv])?;
    let st = cfg.setting()?;
    let rows = enumerate_rows(cfg, &st)?;
    let disagreements = rows.iter().filter(|r| r.agree == Some(false)).count();
    let document = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                w.write_record(CSV_COLUMNS).map_err(csv_error)?;
            }
            for r in &rows {
                w.serialize(r.csv()).map_err(csv_error)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::usage(e.to_string()))?).expect("csv output is utf-8")
        }
        _ => to_json(&EnumerateDocument {
            system: st.group().sys().label().into(),
            sigma: cfg.sigma.clone(),
            kappa_b: cfg.kappa_b.to_string(),
            length_bound: cfg.length_bound,
            count: rows.len(),
            disagreements,
            rows,
        }),
    };
    Ok(Outcome::with_failures(document, disagreements > 0))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::usage(format!("cannot write csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::KappaSpec;

    fn cfg(bound: usize) -> RunConfig {
        RunConfig {
            length_bound: bound,
            ..RunConfig::default()
        }
    }

    #[test]
    fn bound_zero_lists_length_zero_elements() {
        let c = cfg(0);
        let rows = enumerate_rows(&c, &c.setting().unwrap()).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.length == 0));
    }

    #[test]
    fn row_count_matches_alcove_walk() {
        // Alcoves at distance ≤ 4 from the base alcove in A₂: 1 + 3 + 6 + 9 + 12.
        let alcoves = 1 + 3 + 6 + 9 + 12;
        let c = cfg(4);
        let st = c.setting().unwrap();
        assert_eq!(enumerate_rows(&c, &st).unwrap().len(), 3 * alcoves);
        let fixed = RunConfig {
            kappa_b: KappaSpec::Coweight(vec![1, 0]),
            ..c
        };
        let rows = enumerate_rows(&fixed, &st).unwrap();
        assert_eq!(rows.len(), alcoves);
        assert!(rows.iter().all(|r| r.agree != Some(false)));
    }

    #[test]
    fn csv_header_is_fixed() {
        let c = RunConfig {
            format: Some(Format::Csv),
            ..cfg(1)
        };
        let out = cmd_enumerate(&c).unwrap();
        assert_eq!(out.document.lines().next().unwrap(), CSV_COLUMNS.join(","));
    }
}
