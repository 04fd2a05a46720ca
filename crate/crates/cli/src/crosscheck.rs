//! Property audit over every `x` with `ℓ(x) ≤ bound`.
//!
//! Each property reports how many elements it applied to, how many failed and
//! the first failing element. The conjecture audit covers elements with
//! partial affine σ-support, where neither the σ-support test nor the alcove
//! oracle is asserted (the shortcut already gives "nonempty"); it lists the
//! elements on which those two disagree and never fails the run.

use std::collections::BTreeSet;

use adlv_core::alcove::{self, k_value, k_value_barycentric};
use adlv_core::cartan::{Root, RootSubset};
use adlv_core::criterion::{DimEntry, Setting};
use adlv_core::iwahori::{trivial_class, AffineElement, IwahoriWeyl};
use adlv_core::notation::{self, CheckRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::{pool, to_json, CliError, Outcome};

/// Deliberate defects for exercising the audit itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Faults {
    /// Use `δ = −1` on positive roots and `0` on negative ones when computing `Φ_x`.
    pub flip_delta: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub passed: bool,
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureAudit {
    /// Lengths from here on are settled by the coefficient argument.
    pub large_length_bound: usize,
    pub examined: usize,
    pub criterion_empty: usize,
    pub oracle_empty: usize,
    pub disagreements: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckDocument {
    pub system: String,
    pub sigma: String,
    pub kappa_b: String,
    pub length_bound: usize,
    pub elements: usize,
    pub passed: bool,
    pub properties: Vec<PropertyRecord>,
    pub conjecture_audit: ConjectureAudit,
}

/// Outcome of one property on one element: `None` when it does not apply.
type Check = Option<Result<(), Value>>;

struct Ctx<'a> {
    cfg: &'a RunConfig,
    st: &'a Setting,
    faults: Faults,
    fixed: Option<adlv_core::iwahori::KottwitzClass>,
    xs: Vec<AffineElement>,
}

impl Ctx<'_> {
    fn g(&self) -> &IwahoriWeyl {
        self.st.group()
    }

    fn name(&self, x: &AffineElement) -> String {
        notation::format_affine(self.g(), x)
    }

    fn kappa_matches(&self, x: &AffineElement) -> bool {
        self.fixed
            .as_ref()
            .is_none_or(|k| k.coinvariant == self.st.kottwitz(x).coinvariant)
    }

    fn run<F>(&self, name: &str, f: F) -> Result<PropertyRecord, CliError>
    where
        F: Fn(&AffineElement) -> Result<Check, CliError> + Sync,
    {
        let results: Vec<Check> = self.xs.par_iter().map(&f).collect::<Result<_, _>>()?;
        let checked = results.iter().filter(|r| r.is_some()).count();
        let mut failed = results.into_iter().flatten().filter_map(Result::err);
        let counterexample = failed.next();
        let failures = counterexample.iter().count() + failed.count();
        Ok(PropertyRecord {
            name: name.into(),
            checked,
            failures,
            passed: failures == 0,
            counterexample,
        })
    }
}

fn verdict(ok: bool, payload: impl FnOnce() -> Value) -> Check {
    Some(if ok { Ok(()) } else { Err(payload()) })
}

fn roots(rs: &[Root]) -> Vec<Vec<i32>> {
    rs.iter().map(|r| r.0.clone()).collect()
}

/// `Φ_x`, honouring the injected δ fault.
fn phi_x(g: &IwahoriWeyl, x: &AffineElement, faults: Faults) -> Result<Vec<Root>, CliError> {
    if !faults.flip_delta {
        return Ok(alcove::phi_x_set(g, x)?);
    }
    let delta = |b: &Root| if b.is_positive() { -1 } else { 0 };
    let v = alcove::dominant_decompose(g, x)?.v;
    let w_inv = x.finite.inverse();
    Ok(g.sys()
        .positive_roots()
        .iter()
        .filter(|a| {
            let b = v.act_on_root(a);
            b.pair_int(&x.translation) + delta(&w_inv.act_on_root(&b)) == delta(&b)
        })
        .cloned()
        .collect())
}

fn group_laws(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let g = c.g();
    let sigma = c.st.sigma();
    let mut gens: Vec<&AffineElement> = g.simple_reflections().iter().map(|(_, s)| s).collect();
    gens.extend(g.omega_elements());
    let simple = g.simple_reflections().len();
    for (i, s) in gens.iter().enumerate() {
        let t = gens[(i + 1) % gens.len()];
        let xs = g.mul(x, s);
        let step = g.length(&xs) as i64 - g.length(x) as i64;
        let ok = g.mul(&xs, t) == g.mul(x, &g.mul(s, t))
            && g.apply_sigma(sigma, &xs) == g.mul(&g.apply_sigma(sigma, x), &g.apply_sigma(sigma, s))
            && if i < simple { step.abs() == 1 } else { step == 0 };
        if !ok {
            return Ok(verdict(false, || json!({ "x": c.name(x), "s": c.name(s) })));
        }
    }
    let inv = g.inv(x);
    Ok(verdict(
        g.mul(x, &inv) == g.identity() && g.length(&inv) == g.length(x),
        || json!({ "x": c.name(x) }),
    ))
}

fn k_values(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let g = c.g();
    for a in g.sys().roots() {
        let k = k_value(g, &a, x)?;
        if k != k_value_barycentric(g, &a, x)? || k + k_value(g, &a.neg(), x)? != -1 {
            return Ok(verdict(false, || json!({ "x": c.name(x), "root": a.0 })));
        }
    }
    Ok(Some(Ok(())))
}

fn radical_closed(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let g = c.g();
    let phi: BTreeSet<Root> = phi_x(g, x, c.faults)?.into_iter().collect();
    let rest = RootSubset::new(g.sys().positive_roots().iter().filter(|a| !phi.contains(a)).cloned());
    let p = g.sys().subset_predicates(&rest);
    Ok(verdict(p.radical && p.closed, || {
        json!({
            "x": c.name(x),
            "phi_x": roots(&phi.iter().cloned().collect::<Vec<_>>()),
            "radical": p.radical,
            "closed": p.closed,
        })
    }))
}

fn w_x_search(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let g = c.g();
    let bfs = alcove::w_x_set(g, x)?;
    let brute = alcove::w_x_set_brute(g, x, c.st.w0())?;
    let left_closed = bfs.iter().all(|w| {
        (0..g.rank())
            .filter(|i| w.has_left_descent(*i))
            .all(|i| bfs.contains(&g.sys().compose(&g.sys().reflection(i), w)))
    });
    Ok(verdict(
        bfs == brute && left_closed,
        || json!({ "x": c.name(x), "bfs": bfs.len(), "brute": brute.len(), "left_closed": left_closed }),
    ))
}

fn one_strip_structure(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let sys = c.g().sys();
    let p = c.st.profile(x)?;
    if p.phi_x.len() != 1 {
        return Ok(None);
    }
    let Some(i) = p.single_strip_index() else {
        return Ok(verdict(
            false,
            || json!({ "x": c.name(x), "reason": "root is not simple" }),
        ));
    };
    Ok(verdict(
        p.w_x_set == vec![sys.identity(), sys.reflection(i)],
        || json!({ "x": c.name(x), "reason": "W_x is not {e, s}" }),
    ))
}

/// Both supports of the one-strip test, when `x` lies in exactly one strip.
fn one_strip_supports(c: &Ctx, x: &AffineElement) -> Result<Option<(bool, bool)>, CliError> {
    let (sys, st) = (c.g().sys(), c.st);
    let p = st.profile(x)?;
    let Some(i) = p.single_strip_index().filter(|_| p.phi_x.len() == 1) else {
        return Ok(None);
    };
    let full = |w| sys.sigma_support(w, st.sigma()).len() == sys.rank();
    Ok(Some((
        full(&p.eta),
        full(&st.twisted_conjugate(&p.eta, &sys.reflection(i))),
    )))
}

fn one_strip_test(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let Some((eta_full, conj_full)) = one_strip_supports(c, x)?.filter(|_| c.kappa_matches(x)) else {
        return Ok(None);
    };
    let decided = c.st.decide_nonempty(x, &c.cfg.kappa_for(c.st, &c.fixed, x))?;
    Ok(verdict((eta_full && conj_full) == decided.nonempty, || {
        json!({
            "x": c.name(x),
            "eta_support_full": eta_full,
            "conjugate_support_full": conj_full,
            "criterion": decided.nonempty,
            "rule": decided.rule.as_str(),
        })
    }))
}

fn one_strip_central_newton(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let Some((eta_full, conj_full)) = one_strip_supports(c, x)? else {
        return Ok(None);
    };
    if !c.g().newton(x, c.st.sigma()).dominant.is_zero() {
        return Ok(None);
    }
    Ok(verdict(
        eta_full && conj_full,
        || json!({ "x": c.name(x), "eta_support_full": eta_full, "conjugate_support_full": conj_full }),
    ))
}

fn shrunken(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let (g, st) = (c.g(), c.st);
    let p = st.profile(x)?;
    if !p.shrunken || !c.kappa_matches(x) {
        return Ok(None);
    }
    let full = g.sys().sigma_support(&p.eta, st.sigma()).len() == g.rank();
    let decided = st.decide_nonempty(x, &c.cfg.kappa_for(st, &c.fixed, x))?.nonempty;
    Ok(verdict(
        p.w_x_set.len() == 1 && full == decided,
        || json!({ "x": c.name(x), "W_x": p.w_x_set.len(), "eta_support_full": full, "criterion": decided }),
    ))
}

fn criterion_vs_oracle(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let st = c.st;
    if !c.kappa_matches(x) || !c.g().affine_sigma_support(x, st.sigma()).full {
        return Ok(None);
    }
    let kappa = c.cfg.kappa_for(st, &c.fixed, x);
    let a = st.decide_nonempty(x, &kappa)?;
    let b = st.oracle_nonempty(x, &kappa)?;
    let witness_ok = match &a.alcove_pair {
        Some((j, w)) => st.is_jw_alcove(x, j, w)?,
        None => a.nonempty,
    };
    Ok(verdict(
        a.nonempty == b.nonempty && witness_ok,
        || json!({ "x": c.name(x), "criterion": a.nonempty, "oracle": b.nonempty, "witness_ok": witness_ok }),
    ))
}

fn j_rx(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    for r in c.st.profile(x)?.w_x_set {
        if let Err(e) = c.st.j_rx(x, &r) {
            let r = notation::format_finite(c.g().sys(), &r);
            return Ok(verdict(
                false,
                || json!({ "x": c.name(x), "r": r, "error": e.to_string() }),
            ));
        }
    }
    Ok(Some(Ok(())))
}

fn fixed_point(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let g = c.g();
    let partial = !g.affine_sigma_support(x, c.st.sigma()).full;
    let fixes = g.fixes_point_of_base_alcove(x, c.st.sigma());
    Ok(verdict(
        partial == fixes,
        || json!({ "x": c.name(x), "partial_support": partial, "fixes_point": fixes }),
    ))
}

fn central_newton(c: &Ctx, x: &AffineElement) -> Result<Check, CliError> {
    let g = c.g();
    if g.affine_sigma_support(x, c.st.sigma()).full {
        return Ok(None);
    }
    let nu = g.newton(x, c.st.sigma()).dominant;
    Ok(verdict(
        nu.is_zero(),
        || json!({ "x": c.name(x), "newton": notation::format_qs(&nu.0) }),
    ))
}

fn dimension_consistency(c: &Ctx) -> Result<PropertyRecord, CliError> {
    let st = c.st;
    let kappa = c.fixed.clone().unwrap_or_else(|| trivial_class(st.group().rank()));
    let table = st.dimension_table(&kappa, c.cfg.length_bound, c.cfg.cap)?;
    let mut entries: Vec<(&AffineElement, &DimEntry)> = table.entries.iter().collect();
    entries.sort_by(|a, b| (st.group().length(a.0), a.0).cmp(&(st.group().length(b.0), b.0)));
    let mut failures: Vec<Value> = table
        .conflicts
        .iter()
        .map(|k| {
            json!({
                "x": c.name(&k.x),
                "existing": format!("{:?}", k.existing),
                "proposed": format!("{:?}", k.proposed),
                "rule": k.rule,
            })
        })
        .collect();
    for (x, e) in &entries {
        if let Ok(d) = st.dim_one_strip_rank2(x, &kappa) {
            if **e != DimEntry::Dim(d) {
                failures.push(json!({ "x": c.name(x), "table": format!("{e:?}"), "one_strip": d }));
            }
        }
    }
    Ok(PropertyRecord {
        name: "dimension-consistency".into(),
        checked: entries.len(),
        failures: failures.len(),
        passed: failures.is_empty(),
        counterexample: failures.into_iter().next(),
    })
}

fn conjecture_audit(c: &Ctx) -> Result<ConjectureAudit, CliError> {
    let (g, st) = (c.g(), c.st);
    let partial: Vec<&AffineElement> =
        c.xs.iter()
            .filter(|x| c.kappa_matches(x) && !g.affine_sigma_support(x, st.sigma()).full)
            .collect();
    let verdicts: Vec<(bool, bool, Value)> = partial
        .par_iter()
        .map(|x| {
            let test = st.sigma_support_test(&st.profile(x)?)?;
            let pair = st.first_alcove_pair(x);
            let record = json!({
                "x": c.name(x),
                "criterion": test.nonempty,
                "oracle": pair.is_none(),
                "failing": test.failing.as_ref().map(|f| CheckRecord::new(g.sys(), f)),
                "alcove_pair": pair.as_ref().map(|(j, w)| json!({
                    "J": notation::format_set(j),
                    "w": notation::format_finite(g.sys(), w),
                })),
            });
            Ok((test.nonempty, pair.is_none(), record))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(ConjectureAudit {
        large_length_bound: g.large_length_bound(st.sigma())?.length,
        examined: partial.len(),
        criterion_empty: verdicts.iter().filter(|v| !v.0).count(),
        oracle_empty: verdicts.iter().filter(|v| !v.1).count(),
        disagreements: verdicts.into_iter().filter(|v| v.0 != v.1).map(|v| v.2).collect(),
    })
}

pub fn cmd_crosscheck(cfg: &RunConfig, faults: Faults) -> Result<Outcome, CliError> {
    cfg.format_for(Format::Json, &[Format::Json])?;
    let st = cfg.setting()?;
    let ctx = Ctx {
        cfg,
        st: &st,
        faults,
        fixed: cfg.fixed_kappa(&st)?,
        xs: st.group().enumerate(cfg.length_bound, cfg.cap)?,
    };
    let doc = pool(cfg.jobs)?.install(|| -> Result<CrosscheckDocument, CliError> {
        let mut properties = vec![
            ctx.run("group-laws", |x| group_laws(&ctx, x))?,
            ctx.run("k-value-barycenter", |x| k_values(&ctx, x))?,
            ctx.run("phi-complement-radical-closed", |x| radical_closed(&ctx, x))?,
            ctx.run("w-x-search", |x| w_x_search(&ctx, x))?,
            ctx.run("one-strip-structure", |x| one_strip_structure(&ctx, x))?,
            ctx.run("one-strip-two-support-test", |x| one_strip_test(&ctx, x))?,
            ctx.run("one-strip-central-newton", |x| one_strip_central_newton(&ctx, x))?,
            ctx.run("shrunken-specialization", |x| shrunken(&ctx, x))?,
            ctx.run("criterion-vs-oracle", |x| criterion_vs_oracle(&ctx, x))?,
            ctx.run("j-rx-alcove-pair", |x| j_rx(&ctx, x))?,
            ctx.run("partial-support-fixed-point", |x| fixed_point(&ctx, x))?,
            ctx.run("partial-support-central-newton", |x| central_newton(&ctx, x))?,
        ];
        properties.push(dimension_consistency(&ctx)?);
        Ok(CrosscheckDocument {
            system: st.group().sys().label().into(),
            sigma: cfg.sigma.clone(),
            kappa_b: cfg.kappa_b.to_string(),
            length_bound: cfg.length_bound,
            elements: ctx.xs.len(),
            passed: properties.iter().all(|p| p.passed),
            properties,
            conjecture_audit: conjecture_audit(&ctx)?,
        })
    })?;
    let failed = !doc.passed;
    Ok(Outcome::with_failures(to_json(&doc), failed))
}
