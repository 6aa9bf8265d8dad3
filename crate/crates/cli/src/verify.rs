//! Self-check suites run by `kapitza verify`.

use std::fmt;

use kapitza_core::monodromy::closed_form;
use kapitza_core::stability::{axis_touchpoints, dense_level_search, Grid};
use kapitza_core::{
    cell_trace, identity_terms_a_b, mollified_trace, monodromy_numeric, monodromy_product,
    IntegratorConfig, Resolution, StabilityParams, Waveform, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    ProductClosed,
    Mollification,
    IdentityAb,
    BetaParity,
    AxisCrossing,
    /// Dense search for Tr = −2 near α = ¼ for a rectangular wave.
    RectNeg2Search,
}

impl Suite {
    pub const DEFAULT: [Suite; 5] = [
        Suite::ProductClosed,
        Suite::Mollification,
        Suite::IdentityAb,
        Suite::BetaParity,
        Suite::AxisCrossing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ProductClosed => "product-closed",
            Suite::Mollification => "mollification",
            Suite::IdentityAb => "identity-ab",
            Suite::BetaParity => "beta-parity",
            Suite::AxisCrossing => "axis-crossing",
            Suite::RectNeg2Search => "rect-neg2-search",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Relative fault injected into every closed-form trace.
    pub perturb: f64,
    /// Harmonic count for the rectangular dense search.
    pub n: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20240917,
            perturb: 0.0,
            n: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict}  {:<17} {:<28} {}",
            self.suite, self.name, self.detail
        )
    }
}

fn closed(w: Waveform, p: StabilityParams, o: &VerifyOptions) -> f64 {
    let t = closed_form(w, p).map(|r| r.trace).unwrap_or(f64::NAN);
    t * (1.0 + o.perturb) + o.perturb
}

fn check(suite: Suite, name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check {
        suite: suite.name(),
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run(suite: Suite, o: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::ProductClosed => product_closed(o),
        Suite::Mollification => mollification(o),
        Suite::IdentityAb => identity_ab(o),
        Suite::BetaParity => beta_parity(o),
        Suite::AxisCrossing => axis_crossing(o),
        Suite::RectNeg2Search => rect_neg2_search(o),
    }
}

fn product_closed(o: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let mut pts = Vec::new();
    while pts.len() < 400 {
        let a: f64 = rng.gen_range(-4.0..9.0);
        if a.abs() >= 1e-3 {
            pts.push(StabilityParams::new(a, rng.gen_range(-4.0..4.0)));
        }
    }
    let tol = 1e-9;
    [
        Waveform::Triangular,
        Waveform::RectangularApprox(1),
        Waveform::RectangularApprox(4),
        Waveform::RectangularApprox(10),
        Waveform::RectangularApprox(100),
    ]
    .into_iter()
    .map(|w| {
        let worst = pts
            .iter()
            .map(|&p| {
                let prod = monodromy_product(w, p).map(|r| r.trace).unwrap_or(f64::NAN);
                (prod - closed(w, p, o)).abs() / prod.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        check(
            Suite::ProductClosed,
            format!("{w:?}"),
            worst <= tol,
            format!("max relative deviation {worst:.3e} (tol {tol:.0e})"),
        )
    })
    .collect()
}

fn mollification(o: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0x6d6f);
    let cfg = IntegratorConfig::with_steps(1 << 14);
    let eps = [0.2, 0.1, 0.05, 0.025];
    (0..3)
        .map(|_| {
            let p = StabilityParams::new(rng.gen_range(0.1..2.0), rng.gen_range(0.2..1.0));
            let exact = closed(Waveform::Triangular, p, o);
            let errs: Vec<f64> = eps
                .iter()
                .map(|&e| {
                    (mollified_trace(Waveform::Triangular, p, e, &cfg).unwrap_or(f64::NAN) - exact)
                        .abs()
                })
                .collect();
            let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
            let ok = ratios.iter().all(|r| (1.5..=2.5).contains(r));
            check(
                Suite::Mollification,
                format!("triangular ({:.3}, {:.3})", p.alpha, p.beta),
                ok,
                format!(
                    "error ratios {:?}",
                    ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
                ),
            )
        })
        .collect()
}

fn identity_ab(o: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0x6162);
    let (mut a_gap, mut b_gap, mut a_min) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..10_000 {
        let alpha = rng.gen_range(1e-6..10.0);
        let n = rng.gen_range(1..=1000);
        let t = identity_terms_a_b(alpha, n).expect("alpha > 0");
        a_gap = a_gap.max((t.a_bracket - t.a_factored).abs());
        b_gap = b_gap.max((t.b_bracket - t.b_factored).abs());
        a_min = a_min.min(t.a());
    }
    let mut b_min = f64::INFINITY;
    for k in 0..=200 {
        let alpha = 0.2 + 0.1 * k as f64 / 200.0;
        for n in [20, 50, 100, 1000, 10_000] {
            b_min = b_min.min(identity_terms_a_b(alpha, n).expect("alpha > 0").b());
        }
    }
    vec![
        check(
            Suite::IdentityAb,
            "A bracket = factored",
            a_gap <= 1e-12,
            format!("max gap {a_gap:.3e}"),
        ),
        check(
            Suite::IdentityAb,
            "B bracket = factored",
            b_gap <= 1e-12,
            format!("max gap {b_gap:.3e}"),
        ),
        check(
            Suite::IdentityAb,
            "A >= 0",
            a_min >= 0.0,
            format!("min A {a_min:.3e}"),
        ),
        check(
            Suite::IdentityAb,
            "B >= 0 near alpha=1/4",
            b_min >= 0.0,
            format!("min B {b_min:.3e}"),
        ),
    ]
}

fn beta_parity(o: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0x7061);
    let mut out = Vec::new();
    for w in [
        Waveform::Triangular,
        Waveform::RectangularApprox(4),
        Waveform::RectangularApprox(100),
    ] {
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let p = StabilityParams::new(rng.gen_range(-1.0..4.0), rng.gen_range(-4.0..4.0));
            let q = StabilityParams::new(p.alpha, -p.beta);
            let (tp, tq) = (closed(w, p, o), closed(w, q, o));
            let prod = monodromy_product(w, q).map(|r| r.trace).unwrap_or(f64::NAN);
            let scale = tp.abs().max(1.0);
            worst = worst
                .max((tp - tq).abs() / scale)
                .max((tp - prod).abs() / scale);
        }
        out.push(check(
            Suite::BetaParity,
            format!("{w:?}"),
            worst <= 1e-9,
            format!("max relative gap {worst:.3e}"),
        ));
    }
    let cfg = IntegratorConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..6 {
        let p = StabilityParams::new(rng.gen_range(-1.0..4.0), rng.gen_range(-2.0..2.0));
        let q = StabilityParams::new(p.alpha, -p.beta);
        let tp = monodromy_numeric(Waveform::Cosine, p, &cfg)
            .map(|r| r.trace)
            .unwrap_or(f64::NAN);
        let tq = monodromy_numeric(Waveform::Cosine, q, &cfg)
            .map(|r| r.trace)
            .unwrap_or(f64::NAN);
        worst = worst.max((tp - tq).abs() / tp.abs().max(1.0));
    }
    out.push(check(
        Suite::BetaParity,
        "Cosine",
        worst <= 1e-8,
        format!("max relative gap {worst:.3e}"),
    ));
    out
}

fn axis_crossing(o: &VerifyOptions) -> Vec<Check> {
    let expect = [0.25, 1.0, 2.25, 4.0];
    let (lo, hi, samples) = (-1.0, 4.2, 209);
    let spacing = (hi - lo) / (samples - 1) as f64;
    let cfg = IntegratorConfig::with_steps(1024);
    [
        Waveform::Triangular,
        Waveform::RectangularApprox(10),
        Waveform::Cosine,
    ]
    .into_iter()
    .map(|w| {
        let tr = |a: f64| {
            let p = StabilityParams::new(a, 0.0);
            if w.is_impulsive() {
                closed(w, p, o)
            } else {
                cell_trace(w, p, &cfg).unwrap_or(f64::NAN)
            }
        };
        let tol = if w.is_impulsive() { 1e-9 } else { 1e-6 };
        let found = axis_touchpoints(tr, lo, hi, samples, tol);
        let ok = found.len() == expect.len()
            && found
                .iter()
                .zip(expect)
                .all(|(f, e)| (f - e).abs() <= spacing);
        check(
            Suite::AxisCrossing,
            format!("{w:?}"),
            ok,
            format!(
                "touchpoints {:?}",
                found.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()
            ),
        )
    })
    .collect()
}

fn rect_neg2_search(o: &VerifyOptions) -> Vec<Check> {
    let w = Waveform::RectangularApprox(o.n);
    if let Err(e) = w.validate() {
        return vec![check(
            Suite::RectNeg2Search,
            format!("n = {}", o.n),
            false,
            e.to_string(),
        )];
    }
    let grid = Grid::new(Window::new(0.2, 0.3, -0.5, 0.5), Resolution::new(101, 1001))
        .expect("valid grid");
    let s = dense_level_search(
        |a, b| closed(w, StabilityParams::new(a, b), o),
        &grid,
        -2.0,
        1e-6,
        1e-4,
    );
    let ok = s.hits == 0 && s.beyond == 0;
    let detail = if ok {
        "no nontrivial Tr=-2 solutions near alpha=0.25".to_string()
    } else {
        format!(
            "{} of {} grid points with |Tr+2| <= 1e-6 and {} with |Tr| > 2; closest |Tr+2| = {:.3e} at ({:.4}, {:.4})",
            s.hits, s.points_checked, s.beyond, s.closest.0, s.closest.1, s.closest.2
        )
    };
    vec![check(
        Suite::RectNeg2Search,
        format!("n = {}", o.n),
        ok,
        detail,
    )]
}
