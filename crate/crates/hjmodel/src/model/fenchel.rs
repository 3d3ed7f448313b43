//! Grid-sampled production/profit functions and their transforms: the Young
//! transform and the profit <-> production pair of convex-duality transforms.
//!
//! All grids are geometric (log-spaced): every closed form in this domain is
//! positively homogeneous and a linear grid underresolves near the origin.

use crate::error::{Error, Result};

/// A function sampled on a rectangular lattice in the positive quadrant.
#[derive(Clone, Debug)]
pub struct GridFunction {
    x_axis: Vec<f64>,
    y_axis: Vec<f64>,
    /// Row-major: values[i * y_axis.len() + j] = f(x_axis[i], y_axis[j]).
    values: Vec<f64>,
}

/// Log-spaced axis with n nodes covering [lo, hi]; n odd puts sqrt(lo*hi)
/// exactly in the middle.
pub fn log_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

impl GridFunction {
    pub fn from_fn(
        x_axis: Vec<f64>,
        y_axis: Vec<f64>,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<GridFunction> {
        for axis in [&x_axis, &y_axis] {
            if axis.len() < 2 {
                return Err(Error::Validation("grid axis needs >= 2 nodes".into()));
            }
            for w in axis.windows(2) {
                if !(w[0] > 0.0 && w[1] > w[0]) {
                    return Err(Error::Validation(
                        "grid axes must be positive and strictly increasing".into(),
                    ));
                }
            }
        }
        let mut values = Vec::with_capacity(x_axis.len() * y_axis.len());
        for &x in &x_axis {
            for &y in &y_axis {
                let v = f(x, y);
                if !v.is_finite() {
                    return Err(Error::NumericRange {
                        context: "GridFunction::from_fn".into(),
                        detail: format!("f({x},{y}) = {v}"),
                    });
                }
                values.push(v);
            }
        }
        Ok(GridFunction {
            x_axis,
            y_axis,
            values,
        })
    }

    pub fn x_axis(&self) -> &[f64] {
        &self.x_axis
    }

    pub fn y_axis(&self) -> &[f64] {
        &self.y_axis
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.y_axis.len() + j]
    }

    fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x_axis[i], self.y_axis[j])
    }
}

/// Young transform h(p) = inf over grid nodes v with f(v) > 0 of p.v / f(v),
/// returned sampled on the same lattice (axes reread as price axes).
///
/// Each node contributes the linear form p -> p.(v/f(v)); the infimum over
/// positive prices only depends on the southwest convex hull of the point
/// cloud {v/f(v)}, which makes the evaluation O((N + Q) log N).
pub fn young_transform(f: &GridFunction) -> Result<GridFunction> {
    let mut cloud: Vec<(f64, f64)> = Vec::new();
    for i in 0..f.x_axis.len() {
        for j in 0..f.y_axis.len() {
            let val = f.value(i, j);
            if val > 0.0 {
                let (x, y) = f.node(i, j);
                cloud.push((x / val, y / val));
            }
        }
    }
    if cloud.is_empty() {
        return Err(Error::InfeasibleTransform);
    }
    let chain = southwest_hull(&mut cloud);
    GridFunction::from_fn(f.x_axis.clone(), f.y_axis.clone(), |p1, p2| {
        eval_support(&chain, p1, p2)
    })
}

/// Southwest convex hull: the chain of points that can minimize p.v over
/// strictly positive p, sorted by increasing first coordinate.
fn southwest_hull(cloud: &mut [(f64, f64)]) -> Vec<(f64, f64)> {
    cloud.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
    // Pareto-minimal staircase: keep points whose b strictly decreases.
    let mut front: Vec<(f64, f64)> = Vec::new();
    for &(a, b) in cloud.iter() {
        if let Some(&(_, bl)) = front.last() {
            if b >= bl {
                continue;
            }
        }
        front.push((a, b));
    }
    // Convexify: front is sorted by a asc, b desc; drop reflex vertices.
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &front {
        while hull.len() >= 2 {
            let q = hull[hull.len() - 1];
            let r = hull[hull.len() - 2];
            // Keep q only if it lies strictly below segment r-p:
            // (q-r) x (p-r) > 0 for a convex lower-left chain.
            let cross = (q.0 - r.0) * (p.1 - r.1) - (q.1 - r.1) * (p.0 - r.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// min over hull vertices of p1*a + p2*b; the objective is unimodal along the
/// chain, so a ternary search on the index finds the minimum.
fn eval_support(chain: &[(f64, f64)], p1: f64, p2: f64) -> f64 {
    let obj = |k: usize| p1 * chain[k].0 + p2 * chain[k].1;
    let (mut lo, mut hi) = (0usize, chain.len() - 1);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if obj(m1) <= obj(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo..=hi).map(obj).fold(f64::INFINITY, f64::min)
}

/// Value of a grid Fenchel transform together with where it was attained.
#[derive(Clone, Debug)]
pub struct FenchelValue {
    pub value: f64,
    /// Grid indices of the best node; None when the supremum is the origin.
    pub argmax: Option<(usize, usize)>,
    /// True when the best node sits on the outer grid boundary, i.e. the
    /// grid is too small to contain the true optimizer.
    pub boundary: bool,
}

/// Profit from production: sup over grid nodes (and the origin) of
/// p0 * F(l) - p.l.
pub fn fenchel_profit_from_production(
    f: &GridFunction,
    p: &[f64],
    p0: f64,
) -> Result<FenchelValue> {
    if p.len() != 2 || p[0] <= 0.0 || p[1] <= 0.0 || p0 <= 0.0 {
        return Err(Error::Validation(
            "fenchel_profit_from_production wants positive (p1, p2, p0)".into(),
        ));
    }
    let mut best = FenchelValue {
        value: 0.0, // the origin: p0 * F(0) - p.0 = 0 for neoclassical F
        argmax: None,
        boundary: false,
    };
    let (nx, ny) = (f.x_axis.len(), f.y_axis.len());
    for i in 0..nx {
        for j in 0..ny {
            let (l1, l2) = f.node(i, j);
            let v = p0 * f.value(i, j) - p[0] * l1 - p[1] * l2;
            if v > best.value {
                best.value = v;
                best.argmax = Some((i, j));
                best.boundary = i == nx - 1 || j == ny - 1;
            }
        }
    }
    Ok(best)
}

/// Price grid used when inverting a profit function back into a production
/// function. Axis points and the origin are always included, since optimal
/// prices for degenerate input bundles sit on the boundary.
#[derive(Clone, Debug)]
pub struct PriceSearchGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Default for PriceSearchGrid {
    fn default() -> Self {
        PriceSearchGrid {
            lo: 1e-3,
            hi: 1e3,
            n: 121,
        }
    }
}

/// Production from profit: (1/p0) * inf over the price grid of Pi(p,p0) + p.l.
pub fn fenchel_production_from_profit(
    pi: &mut dyn FnMut(&[f64], f64) -> f64,
    l: &[f64],
    p0: f64,
    grid: &PriceSearchGrid,
) -> Result<f64> {
    if l.len() != 2 || l[0] < 0.0 || l[1] < 0.0 || p0 <= 0.0 {
        return Err(Error::Validation(
            "fenchel_production_from_profit wants l >= 0 and p0 > 0".into(),
        ));
    }
    let axis = log_axis(grid.lo, grid.hi, grid.n);
    let mut points: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for &a in &axis {
        points.push((a, 0.0));
        points.push((0.0, a));
        for &b in &axis {
            points.push((a, b));
        }
    }
    let mut inf = f64::INFINITY;
    for (p1, p2) in points {
        let v = pi(&[p1, p2], p0) + p1 * l[0] + p2 * l[1];
        if !v.is_finite() && v != f64::INFINITY {
            return Err(Error::MalformedProfit(format!(
                "Pi({p1},{p2},{p0}) produced {v}"
            )));
        }
        if v < inf {
            inf = v;
        }
    }
    let f = inf / p0;
    if f < -1e-9 * (1.0 + l[0].abs() + l[1].abs()) {
        return Err(Error::MalformedProfit(format!(
            "recovered production value {f} is negative: profit evaluator is unbounded below"
        )));
    }
    Ok(f.max(0.0))
}
