//! Dense two-phase simplex, generic over the scalar field.
//!
//! One implementation serves two instantiations: f64 with a pivot tolerance,
//! and BigRational with tolerance zero (exact). Bland's rule is used
//! throughout; problems here are tiny (T <= 12 rows), so anti-cycling
//! matters more than pivot steepness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub trait LpScalar: Clone + PartialOrd + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    /// Pivot tolerance of the instantiation (zero for exact arithmetic).
    fn tol() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn is_pos(&self) -> bool {
        *self > Self::tol()
    }
    fn is_neg(&self) -> bool {
        *self < Self::tol().neg()
    }
    fn is_zero_tol(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl LpScalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn add(&self, o: &f64) -> f64 {
        self + o
    }
    fn sub(&self, o: &f64) -> f64 {
        self - o
    }
    fn mul(&self, o: &f64) -> f64 {
        self * o
    }
    fn div(&self, o: &f64) -> f64 {
        self / o
    }
    fn neg(&self) -> f64 {
        -self
    }
    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
    fn tol() -> f64 {
        crate::tol::LP_FLOAT_TOL
    }
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl LpScalar for BigRational {
    fn zero() -> BigRational {
        <BigRational as Zero>::zero()
    }
    fn one() -> BigRational {
        <BigRational as One>::one()
    }
    fn add(&self, o: &BigRational) -> BigRational {
        self + o
    }
    fn sub(&self, o: &BigRational) -> BigRational {
        self - o
    }
    fn mul(&self, o: &BigRational) -> BigRational {
        self * o
    }
    fn div(&self, o: &BigRational) -> BigRational {
        self / o
    }
    fn neg(&self) -> BigRational {
        -self
    }
    fn abs(&self) -> BigRational {
        Signed::abs(self)
    }
    fn tol() -> BigRational {
        <BigRational as Zero>::zero()
    }
    fn from_f64(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap_or_else(<BigRational as Zero>::zero)
    }
    fn to_f64(&self) -> f64 {
        let num = self.numer();
        let den = self.denom();
        // Good enough for reporting: exact when the value fits a double.
        rat_part_to_f64(num) / rat_part_to_f64(den)
    }
}

fn rat_part_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Outcome of a standard-form solve: min c.x s.t. Ax = b, x >= 0, b >= 0.
#[derive(Clone, Debug)]
pub enum LpOutcome<S> {
    Optimal {
        x: Vec<S>,
        objective: S,
        /// Duals y with yA <= c (up to tolerance) and y.b = objective.
        dual: Vec<S>,
    },
    /// Phase 1 could not drive the artificials to zero. The dual vector
    /// certifies infeasibility: y.A <= 0 componentwise and y.b > 0.
    Infeasible { dual: Vec<S>, phase1: S },
    Unbounded,
}

pub struct StandardLp<S> {
    pub a: Vec<Vec<S>>, // m rows, n columns
    pub b: Vec<S>,      // m, nonnegative
    pub c: Vec<S>,      // n
}

struct Tableau<S> {
    rows: usize,
    cols: usize, // structural + artificial
    n_struct: usize,
    a: Vec<Vec<S>>,
    b: Vec<S>,
    basis: Vec<usize>,
    /// Original constraint index of each current row (rows can be dropped).
    row_origin: Vec<usize>,
}

impl<S: LpScalar> Tableau<S> {
    fn new(lp: &StandardLp<S>) -> Tableau<S> {
        let rows = lp.a.len();
        let n_struct = lp.c.len();
        let cols = n_struct + rows;
        let mut a = Vec::with_capacity(rows);
        for (i, row) in lp.a.iter().enumerate() {
            let mut r: Vec<S> = row.clone();
            for k in 0..rows {
                r.push(if k == i { S::one() } else { S::zero() });
            }
            a.push(r);
        }
        let basis: Vec<usize> = (n_struct..cols).collect();
        Tableau {
            rows,
            cols,
            n_struct,
            a,
            b: lp.b.clone(),
            basis,
            row_origin: (0..rows).collect(),
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.a[row][col].clone();
        for j in 0..self.cols {
            self.a[row][j] = self.a[row][j].div(&piv);
        }
        self.b[row] = self.b[row].div(&piv);
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let factor = self.a[i][col].clone();
            if factor.is_zero_tol() {
                continue;
            }
            for j in 0..self.cols {
                self.a[i][j] = self.a[i][j].sub(&factor.mul(&self.a[row][j]));
            }
            self.b[i] = self.b[i].sub(&factor.mul(&self.b[row]));
        }
        self.basis[row] = col;
    }

    /// Minimize cost over columns `allowed`, Bland's rule, starting from the
    /// current basis. Returns (objective, reduced_costs, duals) at optimum,
    /// or None if unbounded.
    #[allow(clippy::needless_range_loop)]
    fn simplex(&mut self, cost: &[S], allowed: usize) -> Option<(S, Vec<S>, Vec<S>)> {
        let max_iters = 2000 + 200 * self.cols;
        for _ in 0..max_iters {
            // duals y = c_B B^-1: since artificial columns started as the
            // identity, y_i = c_{a_i} - reduced cost of artificial column i;
            // compute reduced costs directly from the tableau instead.
            let mut y = vec![S::zero(); self.rows];
            for i in 0..self.rows {
                // The artificial column for original row r is e_r, so its
                // current tableau column holds (B^-1)_{., r} and
                // y_i = sum_k c_B[k] * a[k][n_struct + row_origin[i]].
                let col = self.n_struct + self.row_origin[i];
                let mut acc = S::zero();
                for k in 0..self.rows {
                    let cb = &cost[self.basis[k]];
                    if !cb.is_zero_tol() {
                        acc = acc.add(&cb.mul(&self.a[k][col]));
                    }
                }
                y[i] = acc;
            }
            // Bland: first column with negative reduced cost.
            let mut entering = None;
            let mut reduced = vec![S::zero(); allowed];
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                // rc_j = c_j - y . A_j  (A_j = ORIGINAL column j). The current
                // tableau column equals B^-1 A_j; using original columns via
                // duals avoids storing A twice: but we only kept the tableau,
                // so compute rc from it: rc_j = c_j - c_B . (B^-1 A_j).
                let mut cb_dot = S::zero();
                for k in 0..self.rows {
                    let cb = &cost[self.basis[k]];
                    if !cb.is_zero_tol() {
                        cb_dot = cb_dot.add(&cb.mul(&self.a[k][j]));
                    }
                }
                let rc = cost[j].sub(&cb_dot);
                if rc.is_neg() && entering.is_none() {
                    entering = Some(j);
                }
                reduced[j] = rc;
            }
            let Some(col) = entering else {
                let mut obj = S::zero();
                for k in 0..self.rows {
                    obj = obj.add(&cost[self.basis[k]].mul(&self.b[k]));
                }
                return Some((obj, reduced, y));
            };
            // Ratio test, Bland tie-break on smallest basis column.
            let mut leave: Option<(usize, S)> = None;
            for i in 0..self.rows {
                if self.a[i][col].is_pos() {
                    let ratio = self.b[i].div(&self.a[i][col]);
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio <= *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return None; // unbounded
            };
            self.pivot(row, col);
        }
        None
    }
}

/// Solve min c.x s.t. Ax = b, x >= 0 with b >= 0 componentwise.
pub fn solve_standard<S: LpScalar>(lp: &StandardLp<S>) -> Result<LpOutcome<S>> {
    let rows = lp.a.len();
    let n = lp.c.len();
    for bi in &lp.b {
        if bi.is_neg() {
            return Err(Error::LpFailure("standard form needs b >= 0".into()));
        }
    }
    let mut t = Tableau::new(lp);
    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![S::zero(); t.cols];
    for item in phase1_cost.iter_mut().skip(n) {
        *item = S::one();
    }
    let Some((p1_obj, _, y1)) = t.simplex(&phase1_cost, t.cols) else {
        return Err(Error::LpFailure("phase 1 did not converge".into()));
    };
    if p1_obj.is_pos() {
        return Ok(LpOutcome::Infeasible {
            dual: y1,
            phase1: p1_obj,
        });
    }
    // Drive degenerate artificials out of the basis; a row where no
    // structural pivot exists is redundant and gets dropped so that phase 2
    // can never push its artificial positive again.
    let mut drop_rows = Vec::new();
    for i in 0..rows {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.a[i][j].is_zero_tol()) {
                Some(j) => t.pivot(i, j),
                None => drop_rows.push(i),
            }
        }
    }
    let mut kept_rows: Vec<usize> = (0..rows).collect();
    for &i in drop_rows.iter().rev() {
        t.a.remove(i);
        t.b.remove(i);
        t.basis.remove(i);
        t.row_origin.remove(i);
        kept_rows.remove(i);
    }
    t.rows = t.a.len();
    // Phase 2 over structural columns only.
    let mut phase2_cost = vec![S::zero(); t.cols];
    phase2_cost[..n].clone_from_slice(&lp.c);
    let Some((obj, _, y2)) = t.simplex(&phase2_cost, n) else {
        return Ok(LpOutcome::Unbounded);
    };
    let mut x = vec![S::zero(); n];
    for i in 0..t.rows {
        if t.basis[i] < n {
            x[t.basis[i]] = t.b[i].clone();
        }
    }
    // Duals padded with zeros at dropped (redundant) rows.
    let mut dual = vec![S::zero(); rows];
    for (slot, yi) in kept_rows.iter().zip(y2) {
        dual[*slot] = yi;
    }
    Ok(LpOutcome::Optimal {
        x,
        objective: obj,
        dual,
    })
}

/// Solve max c.x s.t. Ax <= b, x >= 0 (b of any sign) by adding slacks and
/// flipping negative rows. Returns None when infeasible.
pub fn solve_inequality_max<S: LpScalar>(
    a: &[Vec<S>],
    b: &[S],
    c: &[S],
) -> Result<Option<(Vec<S>, S)>> {
    let m = a.len();
    let n = c.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<S> = a[i].clone();
        // slack columns
        for k in 0..m {
            row.push(if k == i { S::one() } else { S::zero() });
        }
        if b[i].is_neg() {
            for v in row.iter_mut() {
                *v = v.neg();
            }
            rhs.push(b[i].neg());
        } else {
            rhs.push(b[i].clone());
        }
        rows.push(row);
    }
    let mut cost = vec![S::zero(); n + m];
    for j in 0..n {
        cost[j] = c[j].neg(); // maximize -> minimize negation
    }
    let lp = StandardLp {
        a: rows,
        b: rhs,
        c: cost,
    };
    match solve_standard(&lp)? {
        LpOutcome::Optimal { x, objective, .. } => {
            Ok(Some((x[..n].to_vec(), objective.neg())))
        }
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded => Err(Error::LpFailure("inequality LP unbounded".into())),
    }
}
