//! Closed-form predictors: the large-ring Bessel limit of the atomic
//! preparation, the Gaussian approximation for square packets, and the peak
//! times and group velocity that follow from them.

use crate::error::{Error, Result};

pub const MAX_BESSEL_ORDER: u32 = 1000;
pub const MAX_BESSEL_ARGUMENT: f64 = 1e4;

const RESCALE_ABOVE: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;

/// Bessel function of the first kind `J_n(x)` for `0 <= n <= 1000`,
/// `0 <= x <= 1e4`.
///
/// Miller's algorithm: recur `J_{k-1} = (2k/x) J_k - J_{k+1}` downward from a
/// starting index well above both `n` and `x`, then normalize with
/// `J_0 + 2 Σ_k J_{2k} = 1`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > MAX_BESSEL_ORDER {
        return Err(Error::Domain("bessel order above 1000"));
    }
    if !(x.is_finite() && (0.0..=MAX_BESSEL_ARGUMENT).contains(&x)) {
        return Err(Error::Domain("bessel argument outside [0, 1e4]"));
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }

    let scale = (order as f64).max(x);
    let start = (scale + 30.0 + 13.0 * scale.sqrt()) as usize;
    let start = start + start % 2;

    let order = order as usize;
    let mut above = 0.0;
    let mut current = 1.0;
    let mut sum = 2.0;
    let mut result = if start == order { 1.0 } else { 0.0 };
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        let idx = k - 1;
        if idx == order {
            result = current;
        }
        if idx == 0 {
            sum += current;
        } else if idx % 2 == 0 {
            sum += 2.0 * current;
        }
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            result *= RESCALE_BY;
        }
    }
    Ok(result / sum)
}

/// `J_d(x)` for signed order, using `J_{-d} = (-1)^d J_d` and
/// `J_d(-x) = (-1)^d J_d(x)`.
pub fn bessel_j_signed(order: i64, x: f64) -> Result<f64> {
    let magnitude = u32::try_from(order.unsigned_abs())
        .map_err(|_| Error::Domain("bessel order above 1000"))?;
    let value = bessel_j(magnitude, x.abs())?;
    let odd = magnitude % 2 == 1;
    let flips = (order < 0 && odd) as u8 + (x < 0.0 && odd) as u8;
    Ok(if flips % 2 == 1 { -value } else { value })
}

/// Infinite-ring atomic fidelity `J_d(2wt)²`.
pub fn atomic_fidelity_limit(d: i64, w: f64, t: f64) -> Result<f64> {
    let j = bessel_j_signed(d, 2.0 * w * t)?;
    Ok(j * j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxKind {
    Fidelity,
    Probability,
}

/// Gaussian approximant `amplitude · exp(-(d + drift)² / (2 variance))` for a
/// square packet of width `λ`, at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianApprox {
    pub kind: ApproxKind,
    pub amplitude: f64,
    /// Sites squared.
    pub variance: f64,
    /// `2wt sinθ`; the packet is centered at `d = -drift`.
    pub drift: f64,
}

fn check_lambda(lambda: usize) -> Result<f64> {
    if lambda.is_multiple_of(2) {
        return Err(Error::EvenWidth(lambda));
    }
    if lambda < 3 {
        return Err(Error::Domain("gaussian approximant needs lambda >= 3"));
    }
    Ok(lambda as f64)
}

impl GaussianApprox {
    /// `A(t) = 3λ² / (π √((λ²-1)² + 144 w²t² cos²θ))`,
    /// `σ_F² = ((λ²-1)² + 144 w²t² cos²θ) / (12(λ²-1))`.
    pub fn fidelity(lambda: usize, w: f64, theta: f64, t: f64) -> Result<Self> {
        let l = check_lambda(lambda)?;
        let spread = l * l - 1.0;
        let wtc = w * t * theta.cos();
        let radicand = spread * spread + 144.0 * wtc * wtc;
        Ok(Self {
            kind: ApproxKind::Fidelity,
            amplitude: 3.0 * l * l / (core::f64::consts::PI * radicand.sqrt()),
            variance: radicand / (12.0 * spread),
            drift: 2.0 * w * t * theta.sin(),
        })
    }

    /// `B(t) = 6λ / (π √((λ²-1)² + 576 w²t² cos²θ))`,
    /// `σ_P² = ((λ²-1)² + 576 w²t² cos²θ) / (24(λ²-1))`.
    pub fn probability(lambda: usize, w: f64, theta: f64, t: f64) -> Result<Self> {
        let l = check_lambda(lambda)?;
        let spread = l * l - 1.0;
        let wtc = w * t * theta.cos();
        let radicand = spread * spread + 576.0 * wtc * wtc;
        Ok(Self {
            kind: ApproxKind::Probability,
            amplitude: 6.0 * l / (core::f64::consts::PI * radicand.sqrt()),
            variance: radicand / (24.0 * spread),
            drift: 2.0 * w * t * theta.sin(),
        })
    }

    pub fn center(&self) -> f64 {
        -self.drift
    }

    pub fn evaluate(&self, d: f64) -> f64 {
        let x = d + self.drift;
        self.amplitude * (-x * x / (2.0 * self.variance)).exp()
    }
}

pub fn gaussian_fidelity(lambda: usize, d: f64, w: f64, theta: f64, t: f64) -> Result<f64> {
    Ok(GaussianApprox::fidelity(lambda, w, theta, t)?.evaluate(d))
}

pub fn gaussian_probability(lambda: usize, d: f64, w: f64, theta: f64, t: f64) -> Result<f64> {
    Ok(GaussianApprox::probability(lambda, w, theta, t)?.evaluate(d))
}

/// Time of maximal Gaussian fidelity at `θ = 0`:
/// `t* = √((λ²-1)(12d² - λ² + 1)) / (12w)`.
///
/// Fails when `12d² <= λ² - 1`, i.e. the packet already covers the receiver.
pub fn peak_time_theta0(lambda: usize, d: f64, w: f64) -> Result<f64> {
    let l = check_lambda(lambda)?;
    let spread = l * l - 1.0;
    let radicand = spread * (12.0 * d * d - spread);
    if radicand <= 0.0 {
        return Err(Error::Domain("receiver lies inside the initial packet"));
    }
    Ok(radicand.sqrt() / (12.0 * w))
}

/// Arrival time `d/(2w)` of the non-spreading packet at `θ = -π/2`.
pub fn peak_time_linear(d: f64, w: f64) -> f64 {
    d / (2.0 * w)
}

/// `v = -2w sinθ`.
pub fn group_velocity(w: f64, theta: f64) -> f64 {
    -2.0 * w * theta.sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    /// Power series `Σ_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!)`, summed until the
    /// terms stop contributing.
    fn series_j(n: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = 1.0;
        for i in 1..=n {
            term *= half / i as f64;
        }
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= -half * half / (k * (k + n as f64));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > half {
                break;
            }
            k += 1.0;
        }
        sum
    }

    /// `J_n(x) = (1/π) ∫_0^π cos(nτ - x sinτ) dτ`; the integrand is smooth and
    /// periodic so the trapezoid rule converges geometrically.
    fn integral_j(n: u32, x: f64) -> f64 {
        let points = 2 * (n as usize + x as usize) + 200;
        let h = PI / points as f64;
        let f = |tau: f64| (n as f64 * tau - x * tau.sin()).cos();
        let mut sum = 0.5 * (f(0.0) + f(PI));
        for i in 1..points {
            sum += f(i as f64 * h);
        }
        sum * h / PI
    }

    #[test]
    fn bessel_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for d in 1..20 {
            assert_eq!(bessel_j(d, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn bessel_j1_at_one() {
        let oracle = series_j(1, 1.0);
        assert!((oracle - 0.4400505857).abs() < 1e-10);
        assert!((bessel_j(1, 1.0).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn bessel_matches_power_series() {
        for n in [0u32, 1, 2, 5, 10, 30, 60] {
            for i in 1..=40 {
                let x = 0.25 * i as f64;
                let diff = (bessel_j(n, x).unwrap() - series_j(n, x)).abs();
                assert!(diff < 1e-12, "n={n} x={x} diff={diff}");
            }
        }
    }

    #[test]
    fn bessel_matches_integral_representation() {
        for n in [0u32, 1, 7, 40, 150, 600, 1000] {
            for x in [0.3, 12.5, 97.0, 480.0, 1999.0, 10_000.0] {
                let diff = (bessel_j(n, x).unwrap() - integral_j(n, x)).abs();
                assert!(diff < 1e-10, "n={n} x={x} diff={diff}");
            }
        }
    }

    #[test]
    fn bessel_tiny_argument_does_not_overflow() {
        let v = bessel_j(3, 1e-9).unwrap();
        assert!((v - 1e-27 / 48.0).abs() < 1e-40);
        assert_eq!(bessel_j(1000, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn bessel_domain() {
        assert!(bessel_j(1001, 1.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, 1e4 + 1.0).is_err());
        assert!(bessel_j(0, f64::NAN).is_err());
    }

    #[test]
    fn signed_order_reflection() {
        let x = 3.7;
        assert_eq!(bessel_j_signed(-3, x).unwrap(), -bessel_j(3, x).unwrap());
        assert_eq!(bessel_j_signed(-4, x).unwrap(), bessel_j(4, x).unwrap());
        assert_eq!(bessel_j_signed(3, -x).unwrap(), -bessel_j(3, x).unwrap());
    }

    #[test]
    fn atomic_limit_examples() {
        assert_eq!(atomic_fidelity_limit(0, 1.0, 0.0).unwrap(), 1.0);
        // Dense scan of the power-series oracle.
        let mut best = (0.0, 0.0);
        for i in 0..=20_000 {
            let t = i as f64 * 1e-3;
            let v = series_j(10, 2.0 * t).powi(2);
            if v > best.1 {
                best = (t, v);
            }
        }
        assert!((best.0 - 5.885).abs() < 2e-3);
        let at = atomic_fidelity_limit(10, 1.0, best.0).unwrap();
        assert!((at - best.1).abs() < 1e-12);
        assert_eq!(
            atomic_fidelity_limit(-10, 1.0, 2.0).unwrap(),
            atomic_fidelity_limit(10, 1.0, 2.0).unwrap()
        );
    }

    #[test]
    fn gaussian_fidelity_examples() {
        let expect = 3.0 * 121.0 / (120.0 * PI);
        assert!((expect - 0.96289).abs() < 1e-5);
        let v = gaussian_fidelity(11, 30.0, 1.0, -FRAC_PI_2, 15.0).unwrap();
        assert!((v - expect).abs() < 1e-12);
        let v = gaussian_fidelity(11, 0.0, 1.0, 0.3, 0.0).unwrap();
        assert!((v - expect).abs() < 1e-12);
        let g = GaussianApprox::fidelity(11, 1.0, 0.0, 0.0).unwrap();
        assert!((g.variance.sqrt() - 10f64.sqrt()).abs() < 1e-14);
        assert!(gaussian_fidelity(1, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(gaussian_fidelity(4, 0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn gaussian_probability_examples() {
        let g = GaussianApprox::probability(11, 1.0, 0.0, 0.0).unwrap();
        assert!((g.variance - 5.0).abs() < 1e-14);
        let v0 = GaussianApprox::probability(11, 1.0, -FRAC_PI_2, 0.0).unwrap();
        for t in [1.0, 10.0, 50.0] {
            let g = GaussianApprox::probability(11, 1.0, -FRAC_PI_2, t).unwrap();
            assert!((g.variance - v0.variance).abs() < 1e-12);
            assert!((g.center() - 2.0 * t).abs() < 1e-12);
            assert!((g.evaluate(2.0 * t) - g.amplitude).abs() < 1e-15);
        }
    }

    #[test]
    fn variances_grow_unless_linear() {
        for theta in [0.0, -FRAC_PI_4, 1.0] {
            let mut last = (0.0, 0.0);
            for i in 0..50 {
                let t = i as f64;
                let f = GaussianApprox::fidelity(11, 1.0, theta, t)
                    .unwrap()
                    .variance;
                let p = GaussianApprox::probability(11, 1.0, theta, t)
                    .unwrap()
                    .variance;
                assert!(f >= last.0 && p >= last.1);
                last = (f, p);
            }
        }
    }

    #[test]
    fn peak_time_examples() {
        let t = peak_time_theta0(11, 30.0, 1.0).unwrap();
        assert!((t - 94.3398).abs() < 1e-4);
        assert!((peak_time_theta0(11, 10.0, 1.0).unwrap() - 30.0).abs() < 1e-12);
        let far = peak_time_theta0(11, 1e5, 1.0).unwrap();
        assert!((far / (1e5 * (120f64 / 12.0).sqrt()) - 1.0).abs() < 1e-8);
        assert!(peak_time_theta0(11, 3.0, 1.0).is_err());
        assert_eq!(peak_time_linear(90.0, 1.0), 45.0);
        assert_eq!(peak_time_linear(0.0, 1.0), 0.0);
    }

    #[test]
    fn group_velocity_examples() {
        assert_eq!(group_velocity(1.0, 0.0), 0.0);
        assert!((group_velocity(1.0, -FRAC_PI_2) - 2.0).abs() < 1e-15);
        assert!((group_velocity(1.0, -FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-15);
    }
}
