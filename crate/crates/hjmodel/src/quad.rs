//! Adaptive quadrature: Gauss-Kronrod 7-15 with interval subdivision, plus
//! an iterated 2D driver. Subdivision follows the largest error estimate;
//! the final sum runs over the interval list in position order so results
//! are deterministic.

/// One-dimensional result with its error estimate.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

// Gauss-Kronrod 7-15 nodes and weights (positive half; node 0 is the center).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);
    let mut result_gauss = 0.0;
    let mut result_kronrod = WGK[7] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        result_kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            // odd-index Kronrod nodes are the embedded Gauss nodes
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    result_gauss += WG[3] * fc;
    let value = result_kronrod * half;
    let error = ((result_kronrod - result_gauss) * half).abs();
    (value, error)
}

/// Adaptive 1D integral of f over [a, b] to relative tolerance `rel_tol`
/// (with an absolute floor for integrals near zero).
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
        };
    }
    #[derive(Clone, Copy)]
    struct Piece {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }
    let (v0, e0) = gk15(f, a, b);
    let mut pieces = vec![Piece {
        a,
        b,
        value: v0,
        error: e0,
    }];
    let abs_floor = 1e-300;
    for _ in 0..2_000 {
        let total: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        if err <= rel_tol * total.abs().max(abs_floor) || err < 1e-16 {
            break;
        }
        // split the piece with the largest error
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .unwrap();
        let p = pieces[idx];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            break; // interval at float resolution
        }
        let (v1, e1) = gk15(f, p.a, mid);
        let (v2, e2) = gk15(f, mid, p.b);
        pieces[idx] = Piece {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        };
        pieces.push(Piece {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    pieces.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    QuadResult {
        value: pieces.iter().map(|p| p.value).sum(),
        error: pieces.iter().map(|p| p.error).sum(),
    }
}

/// Iterated 2D integral over the rectangle [ax,bx] x [ay(x), by(x)], outer
/// over x. The inner tolerance is tightened relative to the outer one.
pub fn integrate2d(
    f: &mut dyn FnMut(f64, f64) -> f64,
    ax: f64,
    bx: f64,
    y_range: &mut dyn FnMut(f64) -> (f64, f64),
    rel_tol: f64,
) -> QuadResult {
    let inner_tol = (rel_tol * 0.25).max(1e-12);
    let mut outer = |x: f64| {
        let (ay, by) = y_range(x);
        if ay >= by {
            return 0.0;
        }
        integrate(&mut |y| f(x, y), ay, by, inner_tol).value
    };
    integrate(&mut outer, ax, bx, rel_tol)
}
