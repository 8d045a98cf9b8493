//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Weights of the embedded 7-point Gauss rule at the odd Kronrod nodes.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

fn gauss_kronrod<T: Scalar>(f: &mut impl FnMut(T) -> T, lo: T, hi: T) -> Segment<T> {
    let center = T::lit(0.5) * (lo + hi);
    let half = T::lit(0.5) * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * T::lit(KRONROD_WEIGHTS[7]);
    let mut gauss = fc * T::lit(GAUSS_WEIGHTS[3]);
    for i in 0..7 {
        let dx = half * T::lit(KRONROD_NODES[i]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(KRONROD_WEIGHTS[i]);
        if i % 2 == 1 {
            gauss = gauss + pair * T::lit(GAUSS_WEIGHTS[i / 2]);
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
}

/// Integrates `f` over `[lo, hi]` until the summed Kronrod–Gauss error
/// estimate falls below `rel_tol·|I|` (or `abs_tol`).
pub fn integrate<T: Scalar>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    rel_tol: T,
    abs_tol: T,
    max_segments: usize,
) -> Result<Quadrature<T>> {
    let mut segments = vec![gauss_kronrod(&mut f, lo, hi)];
    loop {
        let value = compensated_sum(segments.iter().map(|s| s.value));
        let error = compensated_sum(segments.iter().map(|s| s.error));
        let evaluations = 15 * segments.len();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailed {
                estimate: f64::NAN,
                evaluations,
            });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if segments.len() >= max_segments {
            return Err(Error::QuadratureFailed {
                estimate: error.to_f64().unwrap_or(f64::NAN),
                evaluations,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).expect("finite"))
            .map(|(i, _)| i)
            .expect("non-empty");
        let s = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (s.lo + s.hi);
        segments.push(gauss_kronrod(&mut f, s.lo, mid));
        segments.push(gauss_kronrod(&mut f, mid, s.hi));
    }
}
