//! SVG picture of a rank-2 apartment.
//!
//! The coweight plane is embedded with the simple coroots at their classical
//! angles (Cholesky factor of the coroot Gram matrix). Geometry is exact up to
//! this final step; coordinates are printed with three decimals.

use std::fmt::Write;

use adlv_core::cartan::{Coweight, Root, RootSystem};
use adlv_core::criterion::{Rule, Setting};
use adlv_core::iwahori::{trivial_class, AffineElement};
use adlv_core::notation;
use num_traits::ToPrimitive;

use crate::config::{Format, RunConfig};
use crate::{CliError, Outcome};

const UNIT: f64 = 120.0;
const MARGIN: f64 = 0.35;
const EPS: f64 = 1e-9;

type Pt = [f64; 2];

struct Embedding {
    /// Euclidean images of the simple coroots.
    basis: [Pt; 2],
}

impl Embedding {
    fn new(sys: &RootSystem) -> Self {
        let a = sys.cartan_matrix();
        // (α_i, α_i) up to a common scale, from a_ij (α_i, α_i) = a_ji (α_j, α_j).
        let d = if a[0][1] == 0 {
            [1.0, 1.0]
        } else {
            [a[1][0] as f64 / a[0][1] as f64, 1.0]
        };
        // (α_i∨, α_j∨) = 2 a_ij / (α_j, α_j)
        let gram = |i: usize, j: usize| 2.0 * a[i][j] as f64 / d[j];
        let e0 = [gram(0, 0).sqrt(), 0.0];
        let x = gram(0, 1) / e0[0];
        let e1 = [x, (gram(1, 1) - x * x).sqrt()];
        Embedding { basis: [e0, e1] }
    }

    fn point(&self, sys: &RootSystem, p: &Coweight) -> Pt {
        let c: Vec<f64> = sys
            .coroot_coordinates(p)
            .expect("rank 2")
            .iter()
            .map(|q| q.to_f64().expect("finite"))
            .collect();
        [
            c[0] * self.basis[0][0] + c[1] * self.basis[1][0],
            c[0] * self.basis[0][1] + c[1] * self.basis[1][1],
        ]
    }

    /// `n` with `⟨a, p⟩ = n · point(p)`.
    fn functional(&self, sys: &RootSystem, a: &Root) -> Pt {
        let v: Vec<f64> = (0..2)
            .map(|j| {
                let coroot = Coweight::from_ints(&sys.coroot_as_coweight(&sys.simple_root(j)));
                sys.pair(a, &coroot).expect("rank 2").to_f64().expect("finite")
            })
            .collect();
        // n solves Mᵀ n = v with M = [e0 e1] as columns.
        let [e0, e1] = self.basis;
        let det = e0[0] * e1[1] - e1[0] * e0[1];
        [(e1[1] * v[0] - e0[1] * v[1]) / det, (e0[0] * v[1] - e1[0] * v[0]) / det]
    }
}

fn dot(n: Pt, p: Pt) -> f64 {
    n[0] * p[0] + n[1] * p[1]
}

/// Sutherland-Hodgman clip of a convex polygon to `n · p ≤ c`.
fn clip(poly: &[Pt], n: Pt, c: f64) -> Vec<Pt> {
    let mut out = Vec::new();
    for (i, &p) in poly.iter().enumerate() {
        let q = poly[(i + 1) % poly.len()];
        let (fp, fq) = (dot(n, p) - c, dot(n, q) - c);
        if fp <= EPS {
            out.push(p);
        }
        if (fp < -EPS && fq > EPS) || (fp > EPS && fq < -EPS) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Endpoints of the segment of `n · p = c` inside the convex polygon.
fn chord(poly: &[Pt], n: Pt, c: f64) -> Option<(Pt, Pt)> {
    let on: Vec<Pt> = clip(poly, n, c)
        .into_iter()
        .filter(|p| (dot(n, *p) - c).abs() < 1e-7)
        .collect();
    let first = *on.first()?;
    let far = on
        .iter()
        .copied()
        .max_by(|a, b| dist(*a, first).total_cmp(&dist(*b, first)))?;
    (dist(first, far) > 1e-7).then_some((first, far))
}

fn dist(a: Pt, b: Pt) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Sorts the vertices of a convex polygon counterclockwise.
fn convex_order(mut pts: Vec<Pt>) -> Vec<Pt> {
    let n = pts.len() as f64;
    let c = [
        pts.iter().map(|p| p[0]).sum::<f64>() / n,
        pts.iter().map(|p| p[1]).sum::<f64>() / n,
    ];
    pts.sort_by(|a, b| {
        (a[1] - c[1])
            .atan2(a[0] - c[0])
            .total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0]))
    });
    pts
}

fn num(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    format!("{:.3}", if r == 0.0 { 0.0 } else { r })
}

struct Canvas {
    min: Pt,
    max: Pt,
}

impl Canvas {
    /// World point to SVG user units, with the y axis pointing up.
    fn map(&self, p: Pt) -> String {
        format!(
            "{},{}",
            num((p[0] - self.min[0]) * UNIT),
            num((self.max[1] - p[1]) * UNIT)
        )
    }

    fn points(&self, poly: &[Pt]) -> String {
        poly.iter().map(|p| self.map(*p)).collect::<Vec<_>>().join(" ")
    }

    fn rect(&self) -> Vec<Pt> {
        vec![
            self.min,
            [self.max[0], self.min[1]],
            self.max,
            [self.min[0], self.max[1]],
        ]
    }
}

fn class_of(
    st: &Setting,
    x: &AffineElement,
    kappa: &adlv_core::iwahori::KottwitzClass,
) -> Result<&'static str, CliError> {
    let v = st.decide_nonempty(x, kappa)?;
    Ok(match (v.nonempty, v.rule) {
        (true, Rule::ShortcutFirstlemma) => "shortcut",
        (true, _) => "nonempty",
        (false, _) => "empty",
    })
}

pub fn cmd_render(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.format_for(Format::Svg, &[Format::Svg])?;
    let st = cfg.setting()?;
    let g = st.group();
    let sys = g.sys();
    if sys.rank() != 2 {
        return Err(CliError::geometry(format!(
            "cannot draw {}: rank {} is not 2",
            sys.label(),
            sys.rank()
        )));
    }
    let emb = Embedding::new(sys);
    // One element per alcove: the one whose class is κ(b), or the trivial class.
    let kappa = cfg.fixed_kappa(&st)?.unwrap_or_else(|| trivial_class(2));
    let verts = g.base_alcove_vertices();
    let alcove_of =
        |x: &AffineElement| convex_order(verts.iter().map(|v| emb.point(sys, &g.act_on_point(x, v))).collect());
    let base = alcove_of(&g.identity());
    let mut alcoves = Vec::new();
    for x in g.enumerate(cfg.length_bound, cfg.cap)? {
        if st.kottwitz(&x).coinvariant == kappa.coinvariant {
            let class = class_of(&st, &x, &kappa)?;
            alcoves.push((notation::format_affine(g, &x), class, alcove_of(&x)));
        }
    }

    let all = alcoves.iter().flat_map(|a| a.2.iter()).chain(base.iter());
    let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
    }
    let canvas = Canvas {
        min: [min[0] - MARGIN, min[1] - MARGIN],
        max: [max[0] + MARGIN, max[1] + MARGIN],
    };
    let rect = canvas.rect();
    let (w, h) = (
        (canvas.max[0] - canvas.min[0]) * UNIT,
        (canvas.max[1] - canvas.min[1]) * UNIT,
    );

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        num(w),
        num(h)
    );
    let _ = writeln!(
        svg,
        "<title>{} sigma={} length&lt;={}</title>",
        sys.label(),
        cfg.sigma,
        cfg.length_bound
    );
    svg.push_str(concat!(
        "<style>\n",
        ".shortcut{fill:#9ec5ea}.nonempty{fill:#9ad69a}.empty{fill:#e2e2e2}\n",
        ".strip{fill:#e05050;fill-opacity:0.22}\n",
        ".wall{stroke:#707070;stroke-width:1}\n",
        ".base{fill:none;stroke:#000;stroke-width:3}\n",
        "</style>\n",
    ));

    svg.push_str("<g id=\"alcoves\">\n");
    for (name, class, poly) in &alcoves {
        let _ = writeln!(
            svg,
            r#"<polygon class="{class}" points="{}"><title>{name}</title></polygon>"#,
            canvas.points(poly)
        );
    }
    svg.push_str("</g>\n<g id=\"strips\">\n");
    if cfg.length_bound > 0 {
        for a in sys.positive_roots() {
            let n = emb.functional(sys, a);
            let band = clip(&clip(&rect, n, 1.0), [-n[0], -n[1]], 0.0);
            if band.len() >= 3 {
                let _ = writeln!(
                    svg,
                    r#"<polygon class="strip" points="{}"><title>{}</title></polygon>"#,
                    canvas.points(&band),
                    notation::format_ints(&a.0.iter().map(|c| *c as i64).collect::<Vec<_>>())
                );
            }
        }
    }
    svg.push_str("</g>\n<g id=\"walls\">\n");
    let bound = cfg.length_bound as i64;
    for a in sys.positive_roots() {
        let n = emb.functional(sys, a);
        for k in -bound..=bound {
            if let Some((p, q)) = chord(&rect, n, k as f64) {
                let (p, q) = (canvas.map(p), canvas.map(q));
                let (p, q) = (p.split_once(',').unwrap(), q.split_once(',').unwrap());
                let _ = writeln!(
                    svg,
                    r#"<line class="wall" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    p.0, p.1, q.0, q.1
                );
            }
        }
    }
    svg.push_str("</g>\n");
    let _ = writeln!(svg, r#"<polygon class="base" points="{}"/>"#, canvas.points(&base));
    svg.push_str("</svg>\n");
    Ok(Outcome::ok(svg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(system: &str, bound: usize) -> Result<String, CliError> {
        let cfg = RunConfig {
            system: system.into(),
            sigma: if system == "A1+A1" { "(1 2)" } else { "id" }.into(),
            length_bound: bound,
            ..RunConfig::default()
        };
        cmd_render(&cfg).map(|o| o.document)
    }

    #[test]
    fn strip_bands_match_positive_roots() {
        for (s, n) in [("A2", 3), ("B2", 4), ("G2", 6), ("A1+A1", 2)] {
            let svg = render(s, 2).unwrap();
            assert_eq!(svg.matches(r#"class="strip""#).count(), n, "{s}");
        }
    }

    #[test]
    fn bound_zero_draws_base_alcove_and_walls() {
        let svg = render("A2", 0).unwrap();
        assert_eq!(svg.matches(r#"class="strip""#).count(), 0);
        assert_eq!(svg.matches(r#"class="base""#).count(), 1);
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches(r#"class="shortcut""#).count(), 1);
    }

    #[test]
    fn rank_three_is_refused() {
        assert_eq!(render("A3", 2).unwrap_err().code, 4);
    }

    #[test]
    fn classical_angles() {
        for (s, degrees) in [("A2", 120.0), ("B2", 135.0), ("G2", 150.0), ("A1+A1", 90.0)] {
            let e = Embedding::new(&s.parse().unwrap()).basis;
            let cos = dot(e[0], e[1]) / (dot(e[0], e[0]).sqrt() * dot(e[1], e[1]).sqrt());
            assert!((cos.acos().to_degrees() - degrees).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn output_is_deterministic() {
        assert_eq!(render("B2", 3).unwrap(), render("B2", 3).unwrap());
    }
}
