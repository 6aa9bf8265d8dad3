//! Bracketed scalar root finding.

/// Refines a sign-change bracket `[lo, hi]` of `f` with the Illinois variant
/// of regula falsi, falling back to plain bisection whenever the interpolated
/// point lands outside the bracket.
///
/// Returns the iterate with the smallest `|f|`, or `None` when `f(lo)` and
/// `f(hi)` have the same strict sign. Stops after `max_iter` iterations or
/// once `|f| <= ftol`.
pub fn illinois<F>(mut f: F, lo: f64, hi: f64, ftol: f64, max_iter: usize) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some((a, 0.0));
    }
    if fb == 0.0 {
        return Some((b, 0.0));
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let mut best = if fa.abs() < fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    let mut side = 0i8;
    for _ in 0..max_iter {
        if best.1.abs() <= ftol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || c <= a.min(b) || c >= a.max(b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc.abs() < best.1.abs() {
            best = (c, fc);
        }
        if fc == 0.0 {
            break;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Some(best)
}

/// Plain bisection to an interval width of `xtol`. Returns the midpoint of
/// the final bracket.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let sa = fa.signum();
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let (x, fx) = illinois(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 100).unwrap();
        assert!((x - core::f64::consts::SQRT_2).abs() < 1e-13);
        assert!(fx.abs() <= 1e-14);
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((x - core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(illinois(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 50).is_none());
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn steep_function_converges() {
        let (x, _) = illinois(|x| libm::exp(30.0 * x) - 2.0, -1.0, 1.0, 1e-12, 200).unwrap();
        assert!((x - libm::log(2.0) / 30.0).abs() < 1e-12);
    }
}
