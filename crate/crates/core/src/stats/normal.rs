//! Standard normal and standard bivariate normal distribution functions.
#![allow(clippy::excessive_precision)]

use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::{erfc, erfc_inv};

pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn norm_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        1.0
    } else if x == f64::NEG_INFINITY {
        0.0
    } else {
        0.5 * erfc(-x / SQRT_2)
    }
}

/// Quantile function; returns the infinities at 0 and 1.
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        -SQRT_2 * erfc_inv(2.0 * p)
    }
}

// Gauss-Legendre half rules (weight, node) on [-1, 1] with 6, 12 and 20 points.
const GL6: [(f64, f64); 3] = [
    (0.1713244923791705, 0.9324695142031522),
    (0.3607615730481384, 0.6612093864662647),
    (0.4679139345726904, 0.2386191860831970),
];
const GL12: [(f64, f64); 6] = [
    (0.04717533638651177, 0.9815606342467191),
    (0.1069393259953183, 0.9041172563704750),
    (0.1600783285433464, 0.7699026741943050),
    (0.2031674267230659, 0.5873179542866171),
    (0.2334925365383547, 0.3678314989981802),
    (0.2491470458134029, 0.1252334085114692),
];
const GL20: [(f64, f64); 10] = [
    (0.01761400713915212, 0.9931285991850949),
    (0.04060142980038694, 0.9639719272779138),
    (0.06267204833410906, 0.9122344282513259),
    (0.08327674157670475, 0.8391169718222188),
    (0.1019301198172404, 0.7463319064601508),
    (0.1181945319615184, 0.6360536807265150),
    (0.1316886384491766, 0.5108670019508271),
    (0.1420961093183821, 0.3737060887154196),
    (0.1491729864726037, 0.2277858511416451),
    (0.1527533871307259, 0.07652652113349733),
];

/// `P(X <= h, Y <= k)` for a standard bivariate normal with correlation `rho`.
///
/// Accepts infinite limits. Uses Genz's Gauss-Legendre evaluation of the
/// Drezner-Wesolowsky integral, accurate to about 1e-15.
pub fn bivariate_normal_cdf(h: f64, k: f64, rho: f64) -> f64 {
    upper_orthant(-h, -k, rho)
}

/// `P(X > h, Y > k)`.
fn upper_orthant(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return if k == f64::NEG_INFINITY { 1.0 } else { norm_cdf(-k) };
    }
    if k == f64::NEG_INFINITY {
        return norm_cdf(-h);
    }
    let rules: &[(f64, f64)] = if r.abs() < 0.3 {
        &GL6
    } else if r.abs() < 0.75 {
        &GL12
    } else {
        &GL20
    };
    let mut hk = h * k;
    let mut bvn = 0.0;
    if r.abs() < 0.925 {
        let hs = (h * h + k * k) / 2.0;
        let asr = r.asin();
        for &(w, x) in rules {
            for sign in [-1.0, 1.0] {
                let sn = (asr * (1.0 + sign * x) / 2.0).sin();
                bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
            }
        }
        bvn = bvn * asr / (4.0 * PI) + norm_cdf(-h) * norm_cdf(-k);
    } else {
        let mut k = k;
        if r < 0.0 {
            k = -k;
            hk = -hk;
        }
        if r.abs() < 1.0 {
            let a2 = (1.0 - r) * (1.0 + r);
            let mut a = a2.sqrt();
            let bs = (h - k) * (h - k);
            let c = (4.0 - hk) / 8.0;
            let d = (12.0 - hk) / 16.0;
            let asr = -(bs / a2 + hk) / 2.0;
            if asr > -100.0 {
                bvn = a * asr.exp() * (1.0 - c * (bs - a2) * (1.0 - d * bs / 5.0) / 3.0 + c * d * a2 * a2 / 5.0);
            }
            if hk > -100.0 {
                let b = bs.sqrt();
                let sp = (2.0 * PI).sqrt() * norm_cdf(-b / a);
                bvn -= (-hk / 2.0).exp() * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for &(w, x) in rules {
                for sign in [-1.0, 1.0] {
                    let xs = (a * (sign * x + 1.0)).powi(2);
                    let rs = (1.0 - xs).sqrt();
                    let asr = -(bs / xs + hk) / 2.0;
                    if asr > -100.0 {
                        let sp = 1.0 + c * xs * (1.0 + d * xs);
                        let ep = (-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))).exp() / rs;
                        bvn += a * w * asr.exp() * (ep - sp);
                    }
                }
            }
            bvn = -bvn / (2.0 * PI);
        }
        if r > 0.0 {
            bvn += norm_cdf(-h.max(k));
        } else if h >= k {
            bvn = -bvn;
        } else {
            let l = if h < 0.0 {
                norm_cdf(k) - norm_cdf(h)
            } else {
                norm_cdf(-h) - norm_cdf(-k)
            };
            bvn = l - bvn;
        }
    }
    bvn.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: Phi(h)Phi(k) + integral_0^rho phi2(h, k; r) dr by
    /// composite Gauss-Legendre on many panels.
    fn plackett(h: f64, k: f64, rho: f64) -> f64 {
        let dens = |r: f64| {
            let s = 1.0 - r * r;
            (-(h * h - 2.0 * r * h * k + k * k) / (2.0 * s)).exp() / (2.0 * PI * s.sqrt())
        };
        let panels = 4000;
        let step = rho / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * step;
            for &(w, x) in &GL6 {
                total += w * (dens(mid + x * step / 2.0) + dens(mid - x * step / 2.0));
            }
        }
        norm_cdf(h) * norm_cdf(k) + total * step / 2.0
    }

    #[test]
    fn closed_forms() {
        assert!((bivariate_normal_cdf(0.0, 0.0, 0.0) - 0.25).abs() < 1e-15);
        for &rho in &[-0.999, -0.95, -0.5, 0.0, 0.3, 0.5, 0.8, 0.95, 0.999] {
            let expected = 0.25 + f64::asin(rho) / (2.0 * PI);
            assert!((bivariate_normal_cdf(0.0, 0.0, rho) - expected).abs() < 1e-12, "{rho}");
        }
        assert!((bivariate_normal_cdf(0.0, 0.0, 0.5) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_limits_marginalize() {
        for &k in &[-2.0, -0.3, 0.0, 1.7] {
            for &rho in &[-0.9, 0.0, 0.6] {
                assert!((bivariate_normal_cdf(f64::INFINITY, k, rho) - norm_cdf(k)).abs() < 1e-15);
                assert!((bivariate_normal_cdf(k, f64::INFINITY, rho) - norm_cdf(k)).abs() < 1e-15);
                assert_eq!(bivariate_normal_cdf(f64::NEG_INFINITY, k, rho), 0.0);
            }
        }
        assert_eq!(bivariate_normal_cdf(f64::INFINITY, f64::INFINITY, 0.3), 1.0);
    }

    #[test]
    fn agrees_with_quadrature_oracle() {
        let pts = [-3.1, -1.5, -0.6, 0.0, 0.4, 1.2, 2.7];
        let rhos = [
            -0.999, -0.97, -0.93, -0.8, -0.5, -0.2, 0.1, 0.35, 0.7, 0.9, 0.93, 0.97, 0.999,
        ];
        for &h in &pts {
            for &k in &pts {
                for &rho in &rhos {
                    let a = bivariate_normal_cdf(h, k, rho);
                    let b = plackett(h, k, rho);
                    assert!((a - b).abs() < 1e-9, "h={h} k={k} rho={rho}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-10, 0.01, 0.25, 0.5, 0.8, 0.999] {
            let back = norm_cdf(norm_quantile(p));
            assert!((back - p).abs() <= 1e-9 * p, "{p}: {back}");
        }
        assert_eq!(norm_quantile(0.0), f64::NEG_INFINITY);
        assert_eq!(norm_quantile(1.0), f64::INFINITY);
        assert!((norm_quantile(0.975) - 1.959963984540054).abs() < 1e-12);
    }
}
