//! Stability classification, boundary curves and Ince–Strutt diagrams.
//!
//! A Hill equation is stable when `|Tr E| < 2` and unstable when
//! `|Tr E| > 2`; the curves `Tr E = ±2` carry periodic (`+2`) or
//! antiperiodic (`−2`) solutions and bound the instability tongues.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg2::trig_pair;
use crate::monodromy::{closed_form, trace_rectangular_closed};
use crate::numeric::{monodromy_numeric, IntegratorConfig};
use crate::roots::illinois;
use crate::waveform::{StabilityParams, Waveform};
use crate::{Error, Result};

/// Classification tolerance for closed-form traces.
pub const TOL_CLOSED: f64 = 1e-9;
/// Classification tolerance for integrated (cosine) traces.
pub const TOL_NUMERIC: f64 = 1e-6;
/// Iteration cap when refining a contour crossing along a cell edge.
pub const REFINE_MAX_ITER: usize = 20;

pub fn default_tol(w: Waveform) -> f64 {
    if w.is_impulsive() {
        TOL_CLOSED
    } else {
        TOL_NUMERIC
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Unstable,
    Boundary,
}

impl Stability {
    /// One-letter code used in CSV output.
    pub fn code(self) -> char {
        match self {
            Stability::Stable => 'S',
            Stability::Unstable => 'U',
            Stability::Boundary => 'B',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'S' => Some(Stability::Stable),
            'U' => Some(Stability::Unstable),
            'B' => Some(Stability::Boundary),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityClass {
    pub kind: Stability,
    pub trace: f64,
}

/// `Stable` iff `|trace| < 2 − tol`, `Unstable` iff `|trace| > 2 + tol`.
pub fn classify(trace: f64, tol: f64) -> StabilityClass {
    let m = trace.abs();
    let kind = if m < 2.0 - tol {
        Stability::Stable
    } else if m > 2.0 + tol {
        Stability::Unstable
    } else {
        Stability::Boundary
    };
    StabilityClass { kind, trace }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    TracePlus2,
    TraceMinus2,
}

impl BoundaryKind {
    pub fn level(self) -> f64 {
        match self {
            BoundaryKind::TracePlus2 => 2.0,
            BoundaryKind::TraceMinus2 => -2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundaryKind::TracePlus2 => "plus2",
            BoundaryKind::TraceMinus2 => "minus2",
        }
    }
}

/// Polyline in the `(α, β)` plane on which `Tr E` equals `±2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub kind: BoundaryKind,
    pub points: Vec<(f64, f64)>,
    pub closed_form: bool,
}

/// Rectangle `[alpha_min, alpha_max] × [beta_min, beta_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Window {
    pub const GLOBAL: Window = Window::new(-1.0, 4.0, -4.0, 4.0);
    pub const DETAIL: Window = Window::new(-0.2, 0.6, -1.5, 1.5);

    pub const fn new(alpha_min: f64, alpha_max: f64, beta_min: f64, beta_max: f64) -> Self {
        Window {
            alpha_min,
            alpha_max,
            beta_min,
            beta_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.alpha_min, self.alpha_max, self.beta_min, self.beta_max]
            .iter()
            .all(|x| x.is_finite())
            && self.alpha_min < self.alpha_max
            && self.beta_min < self.beta_max;
        if ok {
            Ok(())
        } else {
            Err(Error::DegenerateWindow)
        }
    }
}

/// Number of grid nodes along each axis (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Resolution {
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl Resolution {
    pub const fn new(n_alpha: usize, n_beta: usize) -> Self {
        Resolution { n_alpha, n_beta }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_alpha >= 2 && self.n_beta >= 2 {
            Ok(())
        } else {
            Err(Error::DegenerateWindow)
        }
    }
}

/// Node coordinates of a window sampled at a resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub window: Window,
    pub resolution: Resolution,
}

impl Grid {
    pub fn new(window: Window, resolution: Resolution) -> Result<Self> {
        window.validate()?;
        resolution.validate()?;
        Ok(Grid { window, resolution })
    }

    pub fn alpha_at(&self, i: usize) -> f64 {
        let w = &self.window;
        if i + 1 == self.resolution.n_alpha {
            return w.alpha_max;
        }
        w.alpha_min + (w.alpha_max - w.alpha_min) * i as f64 / (self.resolution.n_alpha - 1) as f64
    }

    pub fn beta_at(&self, j: usize) -> f64 {
        let w = &self.window;
        if j + 1 == self.resolution.n_beta {
            return w.beta_max;
        }
        w.beta_min + (w.beta_max - w.beta_min) * j as f64 / (self.resolution.n_beta - 1) as f64
    }

    /// All nodes in row-major order (β rows, α columns).
    pub fn points(&self) -> Vec<StabilityParams> {
        let mut out = Vec::with_capacity(self.resolution.n_alpha * self.resolution.n_beta);
        for j in 0..self.resolution.n_beta {
            let beta = self.beta_at(j);
            for i in 0..self.resolution.n_alpha {
                out.push(StabilityParams::new(self.alpha_at(i), beta));
            }
        }
        out
    }

    fn nearest(&self, alpha: f64, beta: f64) -> (usize, usize) {
        let w = &self.window;
        let fi = (alpha - w.alpha_min) / (w.alpha_max - w.alpha_min)
            * (self.resolution.n_alpha - 1) as f64;
        let fj =
            (beta - w.beta_min) / (w.beta_max - w.beta_min) * (self.resolution.n_beta - 1) as f64;
        let i = libm::round(fi).clamp(0.0, (self.resolution.n_alpha - 1) as f64) as usize;
        let j = libm::round(fj).clamp(0.0, (self.resolution.n_beta - 1) as f64) as usize;
        (i, j)
    }
}

/// Classified `(α, β)` raster, row-major with β rows and α columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramGrid {
    pub window: Window,
    pub resolution: Resolution,
    pub cells: Vec<StabilityClass>,
}

impl DiagramGrid {
    /// Assembles a grid from traces listed in [`Grid::points`] order.
    pub fn from_traces(grid: Grid, traces: &[f64], tol: f64) -> Result<Self> {
        if traces.len() != grid.resolution.n_alpha * grid.resolution.n_beta {
            return Err(Error::DegenerateWindow);
        }
        Ok(DiagramGrid {
            window: grid.window,
            resolution: grid.resolution,
            cells: traces.iter().map(|&t| classify(t, tol)).collect(),
        })
    }

    pub fn grid(&self) -> Grid {
        Grid {
            window: self.window,
            resolution: self.resolution,
        }
    }

    pub fn cell(&self, i: usize, j: usize) -> &StabilityClass {
        &self.cells[j * self.resolution.n_alpha + i]
    }

    /// Node nearest to `(alpha, beta)` with its coordinates.
    pub fn cell_near(&self, alpha: f64, beta: f64) -> (f64, f64, &StabilityClass) {
        let g = self.grid();
        let (i, j) = g.nearest(alpha, beta);
        (g.alpha_at(i), g.beta_at(j), self.cell(i, j))
    }
}

/// Trace used for diagram cells: closed form for the impulsive waveforms,
/// numeric Floquet integration for the cosine wave.
pub fn cell_trace(w: Waveform, p: StabilityParams, cfg: &IntegratorConfig) -> Result<f64> {
    if w.is_impulsive() {
        Ok(closed_form(w, p)?.trace)
    } else {
        Ok(monodromy_numeric(w, p, cfg)?.trace)
    }
}

/// Rasterises the stability diagram over `window`, one cell per grid node.
pub fn diagram(
    w: Waveform,
    window: Window,
    resolution: Resolution,
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<DiagramGrid> {
    w.validate()?;
    let grid = Grid::new(window, resolution)?;
    let traces = grid
        .points()
        .into_iter()
        .map(|p| cell_trace(w, p, cfg))
        .collect::<Result<Vec<f64>>>()?;
    DiagramGrid::from_traces(grid, &traces, tol)
}

/// Closed-form boundary curves of the triangular wave over
/// `alpha_range`, clipped to `|β| <= beta_max`.
///
/// `Tr = +2`: vertical lines `α = k²` (`k ≥ 1`) and `β = ±2√|α|` for `α < 0`.
/// `Tr = −2`: `β = ±2 |C(α, π) / S(α, π)|`, which is `2√α |cot(π√α)|` for
/// `α > 0` and `2√|α| coth(π√|α|)` for `α < 0`, sampled between the poles
/// at `α = k²`.
pub fn boundary_triangular(
    kind: BoundaryKind,
    alpha_range: (f64, f64),
    beta_max: f64,
    samples: usize,
) -> Result<Vec<BoundaryCurve>> {
    let (lo, hi) = alpha_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && samples >= 2 && beta_max > 0.0) {
        return Err(Error::DegenerateWindow);
    }
    let mut curves = Vec::new();
    let mut push_branch = |a: f64, b: f64, open_lo: bool, open_hi: bool, f: &dyn Fn(f64) -> f64| {
        for sign in [1.0, -1.0] {
            let mut current: Vec<(f64, f64)> = Vec::new();
            for k in 0..samples {
                if (k == 0 && open_lo) || (k + 1 == samples && open_hi) {
                    continue;
                }
                let alpha = if k + 1 == samples {
                    b
                } else {
                    a + (b - a) * k as f64 / (samples - 1) as f64
                };
                let beta = sign * f(alpha);
                if beta.is_finite() && beta.abs() <= beta_max {
                    current.push((alpha, beta));
                } else if current.len() >= 2 {
                    curves.push(BoundaryCurve {
                        kind,
                        points: core::mem::take(&mut current),
                        closed_form: true,
                    });
                } else {
                    current.clear();
                }
            }
            if current.len() >= 2 {
                curves.push(BoundaryCurve {
                    kind,
                    points: current,
                    closed_form: true,
                });
            }
        }
    };

    match kind {
        BoundaryKind::TracePlus2 => {
            if lo < 0.0 {
                push_branch(lo, hi.min(0.0), false, false, &|a: f64| {
                    2.0 * libm::sqrt(-a)
                });
            }
            let mut k = 1u64;
            loop {
                let a = (k * k) as f64;
                if a > hi {
                    break;
                }
                if a >= lo {
                    curves.push(BoundaryCurve {
                        kind,
                        points: vec![(a, -beta_max), (a, beta_max)],
                        closed_form: true,
                    });
                }
                k += 1;
            }
        }
        BoundaryKind::TraceMinus2 => {
            let f = |a: f64| {
                let t = trig_pair(a, PI);
                2.0 * (t.c / t.s).abs()
            };
            if lo < 0.0 {
                push_branch(lo, hi.min(0.0), false, hi >= 0.0, &f);
            }
            // positive side, split at the poles α = k²
            let mut k = 0u64;
            loop {
                let a = (k * k) as f64;
                let b = ((k + 1) * (k + 1)) as f64;
                if a >= hi {
                    break;
                }
                let (s, e) = (a.max(lo), b.min(hi));
                if s < e {
                    let open_lo = s == a && k >= 1;
                    let open_hi = e == b;
                    push_branch(s, e, open_lo, open_hi, &f);
                }
                k += 1;
            }
        }
    }
    Ok(curves)
}

/// Stabilisation window of the inverted pendulum (triangular wave) at `alpha < 0`:
/// `(2√|α|, 2√|α| coth(π√|α|))` in `|β|`.
pub fn stability_gap_negative(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha < 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter("alpha must be negative"));
    }
    let lower = 2.0 * libm::sqrt(-alpha);
    let t = trig_pair(alpha, PI);
    let upper = 2.0 * t.c / t.s;
    Ok((lower, upper))
}

/// Refinement settings for contour crossings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refine {
    /// Accept a crossing once `|f| <= tol`; crossings that do not reach it are dropped.
    pub tol: f64,
    pub max_iter: usize,
}

/// Marching-squares extraction of the zero set of `f` over a grid.
///
/// Each sign change along a cell edge is located by linear interpolation
/// and, when `refine` is given, polished along that edge. Ambiguous saddle
/// cells are resolved with the sign of `f` at the cell centre.
pub fn contour<F>(f: F, grid: &Grid, refine: Option<Refine>) -> Vec<Vec<(f64, f64)>>
where
    F: Fn(f64, f64) -> f64,
{
    let na = grid.resolution.n_alpha;
    let nb = grid.resolution.n_beta;
    let alphas: Vec<f64> = (0..na).map(|i| grid.alpha_at(i)).collect();
    let betas: Vec<f64> = (0..nb).map(|j| grid.beta_at(j)).collect();
    let values: Vec<f64> = (0..nb)
        .flat_map(|j| {
            let b = betas[j];
            alphas.iter().map(move |&a| (a, b))
        })
        .map(|(a, b)| f(a, b))
        .collect();
    contour_from_values(&f, &alphas, &betas, &values, refine)
}

/// Same as [`contour`] with node values already computed (row-major).
pub fn contour_from_values<F>(
    f: &F,
    alphas: &[f64],
    betas: &[f64],
    values: &[f64],
    refine: Option<Refine>,
) -> Vec<Vec<(f64, f64)>>
where
    F: Fn(f64, f64) -> f64,
{
    let na = alphas.len();
    let nb = betas.len();
    let v = |i: usize, j: usize| values[j * na + i];
    let pos = |x: f64| x >= 0.0;

    // edge ids: horizontal (i, j)→(i+1, j) first, then vertical (i, j)→(i, j+1)
    let h_id = |i: usize, j: usize| j * (na - 1) + i;
    let v_base = (na - 1) * nb;
    let v_id = |i: usize, j: usize| v_base + j * na + i;
    let mut crossing: Vec<Option<(f64, f64)>> = vec![None; v_base + na * (nb - 1)];

    let locate = |a0: f64, b0: f64, f0: f64, a1: f64, b1: f64, f1: f64| -> Option<(f64, f64)> {
        let s = if (f1 - f0).abs() > 0.0 {
            f0 / (f0 - f1)
        } else {
            0.5
        };
        let s = if s.is_finite() {
            s.clamp(0.0, 1.0)
        } else {
            0.5
        };
        let point = |s: f64| (a0 + s * (a1 - a0), b0 + s * (b1 - b0));
        match refine {
            None => Some(point(s)),
            Some(r) => {
                let g = |s: f64| {
                    let (a, b) = point(s);
                    f(a, b)
                };
                let (s, fs) = illinois(g, 0.0, 1.0, r.tol, r.max_iter)?;
                if fs.abs() <= r.tol {
                    Some(point(s))
                } else {
                    None
                }
            }
        }
    };

    for j in 0..nb {
        for i in 0..na {
            if i + 1 < na && pos(v(i, j)) != pos(v(i + 1, j)) {
                crossing[h_id(i, j)] = locate(
                    alphas[i],
                    betas[j],
                    v(i, j),
                    alphas[i + 1],
                    betas[j],
                    v(i + 1, j),
                );
            }
            if j + 1 < nb && pos(v(i, j)) != pos(v(i, j + 1)) {
                crossing[v_id(i, j)] = locate(
                    alphas[i],
                    betas[j],
                    v(i, j),
                    alphas[i],
                    betas[j + 1],
                    v(i, j + 1),
                );
            }
        }
    }

    let mut segments: Vec<(usize, usize)> = Vec::new();
    for j in 0..nb - 1 {
        for i in 0..na - 1 {
            let (bl, br, tr, tl) = (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
            let bottom = h_id(i, j);
            let top = h_id(i, j + 1);
            let left = v_id(i, j);
            let right = v_id(i + 1, j);
            let cut: Vec<usize> = [bottom, right, top, left]
                .into_iter()
                .zip([(bl, br), (br, tr), (tr, tl), (tl, bl)])
                .filter(|(_, (x, y))| pos(*x) != pos(*y))
                .map(|(e, _)| e)
                .collect();
            match cut.len() {
                2 => segments.push((cut[0], cut[1])),
                4 => {
                    let ca = 0.5 * (alphas[i] + alphas[i + 1]);
                    let cb = 0.5 * (betas[j] + betas[j + 1]);
                    let centre = if refine.is_some() {
                        f(ca, cb)
                    } else {
                        0.25 * (bl + br + tr + tl)
                    };
                    if pos(centre) == pos(bl) {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => {}
            }
        }
    }
    segments.retain(|&(a, b)| crossing[a].is_some() && crossing[b].is_some());
    chain(&segments, &crossing)
}

/// Joins edge-to-edge segments into polylines.
fn chain(segments: &[(usize, usize)], crossing: &[Option<(f64, f64)>]) -> Vec<Vec<(f64, f64)>> {
    let mut adj: Vec<[usize; 2]> = vec![[usize::MAX; 2]; crossing.len()];
    let link = |adj: &mut Vec<[usize; 2]>, e: usize, s: usize| {
        let slot = &mut adj[e];
        if slot[0] == usize::MAX {
            slot[0] = s;
        } else {
            slot[1] = s;
        }
    };
    for (k, &(a, b)) in segments.iter().enumerate() {
        link(&mut adj, a, k);
        link(&mut adj, b, k);
    }
    let degree =
        |e: usize, adj: &Vec<[usize; 2]>| adj[e].iter().filter(|&&s| s != usize::MAX).count();

    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let walk = |start_edge: usize, first_seg: usize, used: &mut Vec<bool>| {
        let mut line = vec![crossing[start_edge].unwrap()];
        let mut edge = start_edge;
        let mut seg = first_seg;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            edge = if a == edge { b } else { a };
            line.push(crossing[edge].unwrap());
            match adj[edge]
                .iter()
                .copied()
                .find(|&s| s != usize::MAX && !used[s])
            {
                Some(next) => seg = next,
                None => break,
            }
        }
        line
    };

    // open curves start at edges touched by a single segment
    for (k, &(a, b)) in segments.iter().enumerate() {
        if used[k] {
            continue;
        }
        for e in [a, b] {
            if degree(e, &adj) == 1 && !used[k] {
                lines.push(walk(e, k, &mut used));
            }
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            lines.push(walk(segments[k].0, k, &mut used));
        }
    }
    lines
}

/// Numerically extracted `Tr = ±2` curves of the rectangular approximation.
pub fn boundary_rectangular(
    n: u32,
    kind: BoundaryKind,
    window: Window,
    resolution: Resolution,
    refine_tol: f64,
) -> Result<Vec<BoundaryCurve>> {
    Waveform::RectangularApprox(n).validate()?;
    if refine_tol.is_nan() || refine_tol <= 0.0 {
        return Err(Error::InvalidParameter("refine_tol must be positive"));
    }
    let grid = Grid::new(window, resolution)?;
    let level = kind.level();
    let f = |a: f64, b: f64| {
        trace_rectangular_closed(StabilityParams::new(a, b), n).unwrap_or(f64::NAN) - level
    };
    let lines = contour(
        f,
        &grid,
        Some(Refine {
            tol: refine_tol,
            max_iter: REFINE_MAX_ITER,
        }),
    );
    Ok(lines
        .into_iter()
        .filter(|l| l.len() >= 2)
        .map(|points| BoundaryCurve {
            kind,
            points,
            closed_form: false,
        })
        .collect())
}

/// The two sides of the nonnegativity argument for the rectangular wave near
/// `α = (k + ½)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityTerms {
    /// `4 sin²(π√α − 2√α/n) + cos(2π√α − 8√α/n) − 2 cos(4√α/n) + cos(2π√α)`.
    pub a_bracket: f64,
    /// `2 [1 − cos(4√α/n)] [1 − cos(2π√α − 4√α/n)]`, equal to `a_bracket`.
    pub a_factored: f64,
    /// `4 sin²(π√α − 2√α/n) − 2 cos(4√α/n) + 2 cos(2π√α)`.
    pub b_bracket: f64,
    /// `−8 sin(2√α/n) cos(π√α) sin(π√α − 2√α/n)`, equal to `b_bracket`.
    pub b_factored: f64,
    /// `−8 sin(4√α/n) cos(2π√α) sin(π√α − 2√α/n)`. Not an identity for
    /// `b_bracket`; kept because it is the form whose sign is checked.
    pub b_product: f64,
}

impl IdentityTerms {
    /// `A` as used by the nonnegativity check.
    pub fn a(&self) -> f64 {
        self.a_factored
    }

    /// `B` as used by the nonnegativity check.
    pub fn b(&self) -> f64 {
        self.b_product
    }
}

pub fn identity_terms_a_b(alpha: f64, n: u32) -> Result<IdentityTerms> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter("alpha must be positive"));
    }
    if n == 0 {
        return Err(Error::InvalidWaveform { n });
    }
    let u = libm::sqrt(alpha);
    let n = n as f64;
    let x = PI * u - 2.0 * u / n;
    let sx = libm::sin(x);
    let a_bracket = 4.0 * sx * sx + libm::cos(2.0 * PI * u - 8.0 * u / n)
        - 2.0 * libm::cos(4.0 * u / n)
        + libm::cos(2.0 * PI * u);
    let a_factored =
        2.0 * (1.0 - libm::cos(4.0 * u / n)) * (1.0 - libm::cos(2.0 * PI * u - 4.0 * u / n));
    let b_bracket = 4.0 * sx * sx - 2.0 * libm::cos(4.0 * u / n) + 2.0 * libm::cos(2.0 * PI * u);
    let b_factored = -8.0 * libm::sin(2.0 * u / n) * libm::cos(PI * u) * sx;
    let b_product = -8.0 * libm::sin(4.0 * u / n) * libm::cos(2.0 * PI * u) * sx;
    Ok(IdentityTerms {
        a_bracket,
        a_factored,
        b_bracket,
        b_factored,
        b_product,
    })
}

/// Local maxima of `|Tr|` along `β = 0` that reach `2 − tol`: the points
/// where instability tongues touch the axis.
///
/// `trace_on_axis(α)` is sampled at `samples` equally spaced points of
/// `[lo, hi]`; every interior discrete maximum is polished by golden-section
/// search.
pub fn axis_touchpoints<F>(
    mut trace_on_axis: F,
    lo: f64,
    hi: f64,
    samples: usize,
    tol: f64,
) -> Vec<f64>
where
    F: FnMut(f64) -> f64,
{
    if samples < 3 || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Vec::new();
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|k| lo + step * k as f64).collect();
    let g: Vec<f64> = xs.iter().map(|&x| trace_on_axis(x).abs()).collect();
    let mut out = Vec::new();
    for k in 1..samples - 1 {
        if g[k] >= g[k - 1] && g[k] > g[k + 1] {
            let (mut a, mut b) = (xs[k - 1], xs[k + 1]);
            let r = 0.5 * (libm::sqrt(5.0) - 1.0);
            let mut c = b - r * (b - a);
            let mut d = a + r * (b - a);
            let mut fc = trace_on_axis(c).abs();
            let mut fd = trace_on_axis(d).abs();
            for _ in 0..80 {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - r * (b - a);
                    fc = trace_on_axis(c).abs();
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + r * (b - a);
                    fd = trace_on_axis(d).abs();
                }
            }
            let x = 0.5 * (a + b);
            if trace_on_axis(x).abs() >= 2.0 - tol {
                out.push(x);
            }
        }
    }
    out
}

/// Roots of `f(x) = level` found by scanning `[lo, hi]` at `samples` points
/// and polishing each sign change.
pub fn level_crossings<F>(mut f: F, lo: f64, hi: f64, samples: usize, level: f64) -> Vec<f64>
where
    F: FnMut(f64) -> f64,
{
    if samples < 2 || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Vec::new();
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let mut out = Vec::new();
    let mut prev = (lo, f(lo) - level);
    for k in 1..samples {
        let x = if k + 1 == samples {
            hi
        } else {
            lo + step * k as f64
        };
        let fx = f(x) - level;
        if prev.1 == 0.0 {
            out.push(prev.0);
        } else if fx != 0.0 && prev.1.signum() != fx.signum() {
            if let Some((r, _)) = illinois(|t| f(t) - level, prev.0, x, 0.0, 100) {
                out.push(r);
            }
        }
        prev = (x, fx);
    }
    if prev.1 == 0.0 {
        out.push(prev.0);
    }
    out
}

/// Outcome of a dense search for `|Tr − level| <= tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSearch {
    pub points_checked: usize,
    /// Grid points with `|Tr − level| <= tol`.
    pub hits: usize,
    /// Smallest `|Tr − level|` seen and where.
    pub closest: (f64, f64, f64),
    /// Grid points beyond the level (`|Tr| > 2`).
    pub beyond: usize,
}

/// Evaluates `trace` on every node of `grid` with `|β| >= beta_exclude` and
/// counts nodes within `tol` of `level`.
pub fn dense_level_search<F>(
    trace: F,
    grid: &Grid,
    level: f64,
    tol: f64,
    beta_exclude: f64,
) -> LevelSearch
where
    F: Fn(f64, f64) -> f64,
{
    let mut s = LevelSearch {
        points_checked: 0,
        hits: 0,
        closest: (f64::INFINITY, 0.0, 0.0),
        beyond: 0,
    };
    for p in grid.points() {
        if p.beta.abs() < beta_exclude {
            continue;
        }
        let t = trace(p.alpha, p.beta);
        let d = (t - level).abs();
        s.points_checked += 1;
        if d <= tol {
            s.hits += 1;
        }
        if d < s.closest.0 {
            s.closest = (d, p.alpha, p.beta);
        }
        if t.abs() > 2.0 {
            s.beyond += 1;
        }
    }
    s
}
