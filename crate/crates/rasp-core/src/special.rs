//! Standard-normal distribution helpers.
//!
//! The design formulas need the normal CDF `Phi` and its inverse to high
//! accuracy. The CDF goes through the complementary error function; the
//! quantile uses Wichura's PPND16 rational approximation (algorithm AS 241),
//! whose absolute error is below 1e-15 over the full open unit interval —
//! comfortably inside the 1e-9 needed for risk calculations.

use crate::error::{Error, Result};
use statrs::function::erf::erfc;

/// Standard-normal cumulative distribution function `Phi(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard-normal survival function `1 - Phi(z)`, computed without
/// cancellation for large `z`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Standard-normal quantile `Phi^{-1}(p)` for `p` in the open interval (0, 1).
///
/// Rational approximation AS 241 (PPND16), |error| < 1e-15.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Invalid(format!(
            "normal_quantile: p must lie strictly inside (0, 1), got {p}"
        )));
    }

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        // Central region: rational function in r = 0.180625 - q^2.
        let r = 0.180625 - q * q;
        let num = (((((((A[7] * r + A[6]) * r + A[5]) * r + A[4]) * r + A[3]) * r + A[2]) * r
            + A[1])
            * r
            + A[0])
            * q;
        let den = ((((((B[7] * r + B[6]) * r + B[5]) * r + B[4]) * r + B[3]) * r + B[2]) * r
            + B[1])
            * r
            + 1.0;
        return Ok(num / den);
    }

    // Tail regions: rational function in r = sqrt(-ln(min(p, 1-p))).
    let tail_p = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail_p.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((C[7] * r + C[6]) * r + C[5]) * r + C[4]) * r + C[3]) * r + C[2]) * r
            + C[1])
            * r
            + C[0];
        let den = ((((((D[7] * r + D[6]) * r + D[5]) * r + D[4]) * r + D[3]) * r + D[2]) * r
            + D[1])
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((E[7] * r + E[6]) * r + E[5]) * r + E[4]) * r + E[3]) * r + E[2]) * r
            + E[1])
            * r
            + E[0];
        let den = ((((((F[7] * r + F[6]) * r + F[5]) * r + F[4]) * r + F[3]) * r + F[2]) * r
            + F[1])
            * r
            + 1.0;
        num / den
    };
    Ok(if q < 0.0 { -val } else { val })
}

// --- AS 241 (PPND16) coefficients -----------------------------------------

const A: [f64; 8] = [
    3.387_132_872_796_366_608e0,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 8] = [
    0.0, // unused; keeps indices aligned with the published table
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_3e0,
    4.630_337_846_156_545_295_9e0,
    5.769_497_221_460_691_405_5e0,
    3.647_848_324_763_204_605e0,
    1.270_458_252_452_368_382_6e0,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_3e-2,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    0.0,
    2.053_191_626_637_758_821_9e0,
    1.676_384_830_183_803_849_4e0,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_7e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_2e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2e0,
    5.463_784_911_164_114_369_9e0,
    1.784_826_539_917_291_335_8e0,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_2e-5,
    2.010_334_399_292_288_132_7e-7,
];
const F: [f64; 8] = [
    0.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_2e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_6e-15,
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quantile_matches_published_values() {
        // Reference quantiles computed to full double precision.
        let cases = [
            (0.5, 0.0),
            (0.975, 1.959_963_984_540_054),
            (0.95, 1.644_853_626_951_472_2),
            (0.9, 1.281_551_565_544_600_4),
            (0.05, -1.644_853_626_951_472_2),
            (0.1, -1.281_551_565_544_600_4),
            (0.01, -2.326_347_874_040_840_8),
            (0.99, 2.326_347_874_040_840_8),
            (1e-10, -6.361_340_902_404_056),
        ];
        for (p, z) in cases {
            assert_abs_diff_eq!(normal_quantile(p).unwrap(), z, epsilon = 1e-9);
        }
    }

    #[test]
    fn quantile_and_cdf_are_inverse() {
        for &p in &[1e-12, 1e-6, 0.001, 0.05, 0.3, 0.5, 0.7, 0.95, 0.999, 1.0 - 1e-9] {
            let z = normal_quantile(p).unwrap();
            assert_abs_diff_eq!(normal_cdf(z), p, epsilon = 1e-12 + 1e-10 * p);
        }
    }

    #[test]
    fn cdf_reference_values() {
        assert_abs_diff_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-15);
        // The erfc backend is accurate to ~2e-11 absolute over the central
        // range, comfortably inside every tolerance this crate relies on.
        assert_abs_diff_eq!(normal_cdf(1.96), 0.975_002_104_851_779_5, epsilon = 5e-11);
        assert_abs_diff_eq!(normal_cdf(-1.0), 0.158_655_253_931_457_07, epsilon = 5e-11);
        assert_abs_diff_eq!(normal_sf(1.0), 0.158_655_253_931_457_07, epsilon = 5e-11);
        // Survival function keeps relative precision far in the tail.
        let tail = normal_sf(8.0);
        assert!((tail - 6.220_960_574_271_74e-16).abs() / 6.220_960_574_271_74e-16 < 1e-9);
    }

    #[test]
    fn quantile_rejects_boundary() {
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }
}
