//! Single-element commands: `check` and `bgx`.

use adlv_core::criterion::{BgxConclusion, SigmaConjClassPoint};
use adlv_core::notation::{self, CheckRecord, VerdictRecord};
use adlv_core::Error;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::{to_json, CliError, Outcome};

/// Adds a caret line under the offending character of a parse error.
pub(crate) fn annotate(input: &str, e: Error) -> CliError {
    match &e {
        Error::Parse { pos, .. } => {
            let caret: String = " ".repeat(*pos) + "^";
            CliError::usage(format!("{e}\n  {input}\n  {caret}"))
        }
        _ => e.into(),
    }
}

pub fn cmd_check(cfg: &RunConfig, x_text: &str) -> Result<Outcome, CliError> {
    cfg.format_for(Format::Json, &[Format::Json])?;
    let st = cfg.setting()?;
    let fixed = cfg.fixed_kappa(&st)?;
    let x = notation::parse_affine(st.group(), x_text).map_err(|e| annotate(x_text, e))?;
    let kappa = cfg.kappa_for(&st, &fixed, &x);
    let verdict = st.decide_nonempty(&x, &kappa)?;
    let profile = st.profile(&x)?;
    let record = VerdictRecord::new(st.group(), &x, &kappa, &verdict, Some(&profile));
    Ok(Outcome::ok(to_json(&record)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub newton: Vec<String>,
    pub kappa: Vec<String>,
}

impl PointRecord {
    fn new(p: &SigmaConjClassPoint) -> Self {
        PointRecord {
            newton: notation::format_qs(&p.newton.0),
            kappa: notation::format_qs(&p.kappa),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConclusionRecord {
    /// `central`, `equals-b-g-mu` or `undetermined`.
    pub kind: String,
    pub points: Vec<PointRecord>,
    pub length_bound: Option<usize>,
    /// Whether the point set survived doubling the length bound.
    pub stable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BgxRecord {
    pub system: String,
    pub sigma: String,
    pub x: String,
    pub v: String,
    pub mu: Vec<i64>,
    #[serde(rename = "W_x_formula")]
    pub w_x_formula: Vec<String>,
    #[serde(rename = "W_x_alcove")]
    pub w_x_alcove: Vec<String>,
    pub agrees: bool,
    pub checks: Vec<CheckRecord>,
    pub conclusion: ConclusionRecord,
}

pub fn cmd_bgx(cfg: &RunConfig, v_text: &str, mu_text: &str) -> Result<Outcome, CliError> {
    cfg.format_for(Format::Json, &[Format::Json])?;
    let st = cfg.setting()?;
    let sys = st.group().sys();
    let v = notation::parse_finite(sys, v_text).map_err(|e| annotate(v_text, e))?;
    let mu = notation::parse_int_vector(mu_text).map_err(|e| annotate(mu_text, e))?;
    let report = st.bgx_cordial(&v, &mu, cfg.cap)?;
    let conclusion = match &report.conclusion {
        BgxConclusion::Central(p) => ConclusionRecord {
            kind: "central".into(),
            points: vec![PointRecord::new(p)],
            length_bound: None,
            stable: None,
        },
        BgxConclusion::EqualsBgMu(_) => {
            let audited = st.enumerate_b_g_mu(&mu, cfg.cap, true)?;
            ConclusionRecord {
                kind: "equals-b-g-mu".into(),
                points: audited.points.iter().map(PointRecord::new).collect(),
                length_bound: Some(audited.length_bound),
                stable: audited.stable,
            }
        }
        BgxConclusion::Undetermined => ConclusionRecord {
            kind: "undetermined".into(),
            points: vec![],
            length_bound: None,
            stable: None,
        },
    };
    let names =
        |ws: &[adlv_core::weyl::FiniteWeylElement]| ws.iter().map(|w| notation::format_finite(sys, w)).collect();
    let record = BgxRecord {
        system: sys.label().into(),
        sigma: cfg.sigma.clone(),
        x: notation::format_affine(st.group(), &report.x),
        v: notation::format_finite(sys, &v),
        mu,
        w_x_formula: names(&report.formula_set),
        w_x_alcove: names(&report.alcove_set),
        agrees: report.agrees,
        checks: report.checks.iter().map(|c| CheckRecord::new(sys, c)).collect(),
        conclusion,
    };
    Ok(Outcome::with_failures(to_json(&record), !report.agrees))
}
