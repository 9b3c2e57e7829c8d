//! The angular-integrated interference kernel
//!
//! `f(x) = sin x / x + cos x / x² − sin x / x³ = (1/4) ∫_{-1}^{1} (1 + ξ²) cos(xξ) dξ`.
//!
//! It is even, peaks at `f(0) = 2/3` and decays like `1/|x|`.

/// Below this `|x|` the three-term form loses digits to cancellation and the
/// Taylor series is used instead.
pub const TAYLOR_CROSSOVER: f64 = 0.5;

/// Even Taylor coefficients of `f`, `c_k` multiplying `x^{2k}`:
/// `c_k = (−1)^k / (2k)! · (1/(2k+1) + 1/(2k+3)) / 2`.
const TAYLOR: [f64; 9] = {
    let mut c = [0.0; 9];
    let mut k = 0;
    let mut fact = 1.0; // (2k)!
    while k < 9 {
        if k > 0 {
            fact *= ((2 * k - 1) * (2 * k)) as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kk = k as f64;
        c[k] = sign / fact * 0.5 * (1.0 / (2.0 * kk + 1.0) + 1.0 / (2.0 * kk + 3.0));
        k += 1;
    }
    c
};

pub fn f_kernel(x: f64) -> f64 {
    let ax = x.abs();
    if ax < TAYLOR_CROSSOVER {
        f_taylor(ax)
    } else {
        f_direct(ax)
    }
}

/// Series branch, accurate for `|x|` up to about the crossover.
pub fn f_taylor(x: f64) -> f64 {
    let y = x * x;
    TAYLOR.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

/// Three-term branch; loses digits as `x → 0`.
pub fn f_direct(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    s / x + c / (x * x) - s / (x * x * x)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn value_at_origin() {
        assert_eq!(f_kernel(0.0), 2.0 / 3.0);
    }

    #[test]
    fn low_order_coefficients() {
        assert_eq!(TAYLOR[0], 2.0 / 3.0);
        assert!((TAYLOR[1] + 2.0 / 15.0).abs() < 1e-17);
        assert!((TAYLOR[2] - 1.0 / 140.0).abs() < 1e-18);
        assert!((TAYLOR[3] + 1.0 / 5670.0).abs() < 1e-19);
    }

    #[test]
    fn value_at_pi() {
        assert!((f_kernel(PI) + 1.0 / (PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn reference_values() {
        // 40-digit evaluations of the three-term form
        let table = [
            (1e-2, 0.666_653_333_404_761_728_4),
            (0.3, 0.654_724_395_402_325_649_9),
            (0.5, 0.633_777_015_936_272_862_8),
            (1.0, 0.540_302_305_868_139_717_4),
            (2.0, 0.236_949_825_922_845_039_0),
            (5.0, -0.172_766_973_316_793_535_5),
            (10.0, -0.062_248_805_268_812_136_05),
            (100.0, -0.004_976_918_158_227_709_784),
            (1000.0, 0.000_827_441_092_728_752_731),
        ];
        for (x, want) in table {
            let got = f_kernel(x);
            assert!((got - want).abs() < 2e-15, "f({x}) = {got}, want {want}");
            assert_eq!(f_kernel(-x), got);
        }
    }

    #[test]
    fn branches_meet_at_crossover() {
        for x in [TAYLOR_CROSSOVER, TAYLOR_CROSSOVER * (1.0 - 1e-12), TAYLOR_CROSSOVER * (1.0 + 1e-12)] {
            assert!((f_taylor(x) - f_direct(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn decays_within_envelope() {
        let x = 1e3;
        assert!(f_kernel(x).abs() <= 2.0 / x);
        let mut y = 20.0;
        while y < 1e5 {
            assert!(f_kernel(y).abs() <= 1.1 / y, "envelope at {y}");
            y *= 1.37;
        }
    }

    #[test]
    fn maximum_is_at_origin() {
        let mut x = 1e-3;
        while x < 50.0 {
            assert!(f_kernel(x) < 2.0 / 3.0);
            x += 0.01;
        }
    }
}
