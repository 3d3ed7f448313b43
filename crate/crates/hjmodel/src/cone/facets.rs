//! Facet enumeration by the double description method.
//!
//! Spectra are 0/1 vectors, so every extreme ray of the dual cone can be
//! carried as a primitive integer vector: the DD combination step produces
//! nonnegative integer combinations and a gcd reduction keeps entries small.
//! Rational arithmetic only appears in rank computations and basis solves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::PolyhedralCone;
use crate::error::{Error, Result};

/// Desk-scale cap: beyond this only LP membership is offered.
const MAX_FACET_DIM: usize = 12;

/// A facet of the cone: primitive integer inner normal plus the generators
/// it is tight on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetNormal {
    pub nu: Vec<i64>,
    pub tight_generators: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FacetReport {
    pub full_dimensional: bool,
    pub rank: usize,
    pub facets: Vec<FacetNormal>,
    /// When the cone is not full-dimensional: an integer basis of the
    /// orthogonal complement of its linear span.
    pub hull_normals: Vec<Vec<i64>>,
}

/// Complete list of facet normals, each scaled to a primitive integer
/// vector satisfying nu.Z(G) >= 0 for every generator.
pub fn facet_normals(cone: &PolyhedralCone) -> Result<FacetReport> {
    let t = cone.ambient_dim();
    if t > MAX_FACET_DIM {
        return Err(Error::Capability(format!(
            "facet enumeration supports T <= {MAX_FACET_DIM}, got {t}; use LP membership"
        )));
    }
    let gens: Vec<Vec<i128>> = cone
        .generators()
        .iter()
        .map(|s| s.to_i64_vec().iter().map(|&v| v as i128).collect())
        .collect();
    let gens_q: Vec<Vec<BigRational>> = gens.iter().map(|g| to_rational(g)).collect();
    let (rank, basis_rows) = independent_rows(&gens_q, t);

    if rank == t {
        let rays = dd_extreme_rays(&gens, t, &basis_rows)?;
        let facets = rays
            .into_iter()
            .map(|nu| make_facet(&gens, nu))
            .collect::<Result<Vec<_>>>()?;
        return Ok(FacetReport {
            full_dimensional: true,
            rank,
            facets,
            hull_normals: Vec::new(),
        });
    }

    // Low-dimensional cone: work in span coordinates, then lift.
    let basis: Vec<&Vec<BigRational>> = basis_rows.iter().map(|&i| &gens_q[i]).collect();
    let mut coords: Vec<Vec<i128>> = Vec::with_capacity(gens.len());
    for g in &gens_q {
        // u solving u^T B = g, i.e. B^T u = g^T.
        let bt: Vec<Vec<BigRational>> = (0..t)
            .map(|col| basis.iter().map(|row| row[col].clone()).collect())
            .collect();
        let u = solve_linear(&bt, g).ok_or_else(|| {
            Error::LpFailure("generator not in span of chosen basis".into())
        })?;
        coords.push(primitive_integer(&u)?);
    }
    let (sub_rank, sub_basis) = independent_rows(
        &coords.iter().map(|g| to_rational(g)).collect::<Vec<_>>(),
        rank,
    );
    debug_assert_eq!(sub_rank, rank);
    let sub_rays = dd_extreme_rays(&coords, rank, &sub_basis)?;
    let mut facets = Vec::new();
    for w in sub_rays {
        // Lift: nu with B nu = w, free variables zero.
        let b_rows: Vec<Vec<BigRational>> = basis.iter().map(|r| (*r).clone()).collect();
        let w_q = to_rational(&w);
        let nu_q = solve_linear(&b_rows, &w_q)
            .ok_or_else(|| Error::LpFailure("facet lift system inconsistent".into()))?;
        let nu = primitive_integer(&nu_q)?;
        facets.push(make_facet(&gens, nu)?);
    }
    // Orthogonal complement of the span: nullspace of the basis matrix.
    let b_rows: Vec<Vec<BigRational>> = basis.iter().map(|r| (*r).clone()).collect();
    let hull_normals = nullspace(&b_rows, t)
        .iter()
        .map(|v| {
            primitive_integer(v).map(|p| p.iter().map(|&x| x as i64).collect::<Vec<i64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FacetReport {
        full_dimensional: false,
        rank,
        facets,
        hull_normals,
    })
}

fn make_facet(gens: &[Vec<i128>], nu: Vec<i128>) -> Result<FacetNormal> {
    let mut tight = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let d = dot(g, &nu)?;
        if d < 0 {
            return Err(Error::LpFailure(
                "facet normal has negative product with a generator".into(),
            ));
        }
        if d == 0 {
            tight.push(i);
        }
    }
    let nu_i64 = nu
        .iter()
        .map(|&v| i64::try_from(v).map_err(|_| overflow()))
        .collect::<std::result::Result<Vec<i64>, Error>>()?;
    Ok(FacetNormal {
        nu: nu_i64,
        tight_generators: tight,
    })
}

fn overflow() -> Error {
    Error::LpFailure("integer overflow in facet enumeration".into())
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        acc = acc
            .checked_add(x.checked_mul(*y).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    Ok(acc)
}

fn gcd_reduce(v: &mut [i128]) {
    let mut g: i128 = 0;
    for &x in v.iter() {
        g = gcd(g, x.abs());
    }
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Extreme rays of {nu : c.nu >= 0 for all c in cons}; requires the
/// constraint rows to have full rank `dim` (pointed dual cone).
#[allow(clippy::needless_range_loop)]
fn dd_extreme_rays(
    cons: &[Vec<i128>],
    dim: usize,
    basis_rows: &[usize],
) -> Result<Vec<Vec<i128>>> {
    assert_eq!(basis_rows.len(), dim);
    // Initial simplicial cone from the basis constraints: rays are the
    // columns of the (rational) inverse of the basis matrix, scaled to
    // primitive integer vectors.
    let basis_q: Vec<Vec<BigRational>> = basis_rows
        .iter()
        .map(|&i| to_rational(&cons[i]))
        .collect();
    let mut rays: Vec<Vec<i128>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![BigRational::zero(); dim];
        e[j] = BigRational::from_integer(BigInt::from(1));
        let col = solve_linear(&basis_q, &e)
            .ok_or_else(|| Error::LpFailure("basis matrix not invertible".into()))?;
        rays.push(primitive_integer(&col)?);
    }
    let mut processed: Vec<usize> = basis_rows.to_vec();
    let active_mask = |ray: &Vec<i128>, processed: &[usize]| -> Result<u128> {
        let mut m: u128 = 0;
        for (bit, &ci) in processed.iter().enumerate() {
            if dot(&cons[ci], ray)? == 0 {
                m |= 1u128 << bit;
            }
        }
        Ok(m)
    };

    for ci in 0..cons.len() {
        if processed.contains(&ci) {
            continue;
        }
        let vals: Vec<i128> = rays
            .iter()
            .map(|r| dot(&cons[ci], r))
            .collect::<Result<Vec<_>>>()?;
        if vals.iter().all(|&v| v >= 0) {
            processed.push(ci);
            continue;
        }
        let masks: Vec<u128> = rays
            .iter()
            .map(|r| active_mask(r, &processed))
            .collect::<Result<Vec<_>>>()?;
        let mut next: Vec<Vec<i128>> = Vec::new();
        for (r, &v) in rays.iter().zip(&vals) {
            if v >= 0 {
                next.push(r.clone());
            }
        }
        for (pi, &vp) in vals.iter().enumerate() {
            if vp <= 0 {
                continue;
            }
            for (ni, &vn) in vals.iter().enumerate() {
                if vn >= 0 {
                    continue;
                }
                // Combinatorial adjacency: no third ray's active set
                // contains the common active set of the pair.
                let common = masks[pi] & masks[ni];
                if (common.count_ones() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = !masks.iter().enumerate().any(|(k, &mk)| {
                    k != pi && k != ni && (common & mk) == common
                });
                if !adjacent {
                    continue;
                }
                let mut w = vec![0i128; dim];
                for k in 0..dim {
                    let a = vp.checked_mul(rays[ni][k]).ok_or_else(overflow)?;
                    let b = vn.checked_mul(rays[pi][k]).ok_or_else(overflow)?;
                    w[k] = a.checked_sub(b).ok_or_else(overflow)?;
                }
                gcd_reduce(&mut w);
                debug_assert_eq!(dot(&cons[ci], &w).unwrap(), 0);
                next.push(w);
            }
        }
        processed.push(ci);
        next.sort();
        next.dedup();
        rays = next;
    }
    for r in &rays {
        for c in cons {
            debug_assert!(dot(c, r).unwrap() >= 0);
        }
    }
    rays.sort();
    Ok(rays)
}

fn to_rational(v: &[i128]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

/// Indices of a maximal independent subset of rows, scanning in order.
fn independent_rows(rows: &[Vec<BigRational>], width: usize) -> (usize, Vec<usize>) {
    let mut reduced: Vec<Vec<BigRational>> = Vec::new(); // echelon basis
    let mut picked = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for b in &reduced {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = v[lead].clone() / b[lead].clone();
                for k in 0..width {
                    let sub = &f * &b[k];
                    v[k] = &v[k] - sub;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            reduced.push(v);
            picked.push(idx);
            if picked.len() == width {
                break;
            }
        }
    }
    (picked.len(), picked)
}

/// Solve A x = b by Gaussian elimination; free variables set to zero.
/// Returns None when inconsistent.
#[allow(clippy::needless_range_loop)]
fn solve_linear(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let n = a[0].len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let piv = (row..m).find(|&r| !aug[r][col].is_zero());
        let Some(piv) = piv else { continue };
        aug.swap(row, piv);
        let lead = aug[row][col].clone();
        for k in col..=n {
            aug[row][k] = &aug[row][k] / &lead;
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for k in col..=n {
                    let sub = &f * &aug[row][k];
                    aug[r][k] = &aug[r][k] - sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    for r in row..m {
        if !aug[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[r][n].clone();
    }
    Some(x)
}

/// Basis of {x : A x = 0}.
#[allow(clippy::needless_range_loop)]
fn nullspace(a: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let m = a.len();
    let mut aug: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let piv = (row..m).find(|&r| !aug[r][col].is_zero());
        let Some(piv) = piv else { continue };
        aug.swap(row, piv);
        let lead = aug[row][col].clone();
        for k in col..n {
            aug[row][k] = &aug[row][k] / &lead;
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for k in col..n {
                    let sub = &f * &aug[row][k];
                    aug[r][k] = &aug[r][k] - sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![BigRational::zero(); n];
        v[fc] = BigRational::from_integer(BigInt::from(1));
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -aug[r][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Clear denominators and divide by the gcd; the sign convention keeps the
/// vector as produced by the solve.
fn primitive_integer(v: &[BigRational]) -> Result<Vec<i128>> {
    let mut lcm = BigInt::from(1);
    for x in v {
        let den = x.denom();
        let g = num_integer_gcd(&lcm, den);
        lcm = &lcm / &g * den;
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::from(0);
    for x in &out {
        g = num_integer_gcd(&g, &x.abs());
    }
    if g > BigInt::from(1) {
        for x in out.iter_mut() {
            *x = &*x / &g;
        }
    }
    out.iter()
        .map(|x| x.to_i128().ok_or_else(overflow))
        .collect()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a.is_zero() {
        BigInt::from(1)
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::cone_from_spectra;
    use crate::spectrum::Spectrum;
    use std::collections::BTreeSet;

    fn cone_of(bits: &[&str]) -> PolyhedralCone {
        let spectra: BTreeSet<Spectrum> = bits
            .iter()
            .map(|s| Spectrum::from_bits(s.chars().map(|c| c == '1').collect()))
            .collect();
        cone_from_spectra(&spectra)
    }

    #[test]
    fn full_quadrant_has_axis_normals() {
        let report = facet_normals(&cone_of(&["10", "01", "11"])).unwrap();
        assert!(report.full_dimensional);
        let mut nus = report
            .facets
            .iter()
            .map(|f| f.nu.clone())
            .collect::<Vec<_>>();
        nus.sort();
        assert_eq!(nus, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn nested_cone_facets() {
        let report = facet_normals(&cone_of(&["10", "11"])).unwrap();
        assert!(report.full_dimensional);
        let mut nus = report
            .facets
            .iter()
            .map(|f| f.nu.clone())
            .collect::<Vec<_>>();
        nus.sort();
        assert_eq!(nus, vec![vec![0, 1], vec![1, -1]]);
        // (1,-1) is tight exactly on (1,1); (0,1) tight exactly on (1,0).
        for f in &report.facets {
            assert_eq!(f.tight_generators.len(), 1);
        }
    }

    #[test]
    fn half_line_in_r1() {
        let report = facet_normals(&cone_of(&["1"])).unwrap();
        assert!(report.full_dimensional);
        assert_eq!(report.facets.len(), 1);
        assert_eq!(report.facets[0].nu, vec![1]);
    }

    #[test]
    fn low_dimensional_cone_reports_hull() {
        // Single generator (1,1) in R^2: rank 1.
        let report = facet_normals(&cone_of(&["11"])).unwrap();
        assert!(!report.full_dimensional);
        assert_eq!(report.rank, 1);
        assert_eq!(report.hull_normals.len(), 1);
        let h = &report.hull_normals[0];
        assert_eq!(h[0] + h[1], 0, "hull normal orthogonal to (1,1)");
        // One facet: the origin, with normal positive on the generator.
        assert_eq!(report.facets.len(), 1);
    }

    #[test]
    fn rank_two_cone_in_r3_lifts_facets() {
        // Generators (1,0,0) and (1,1,0): a 2D wedge inside the z=0 plane.
        let report = facet_normals(&cone_of(&["100", "110"])).unwrap();
        assert!(!report.full_dimensional);
        assert_eq!(report.rank, 2);
        // Span is the z=0 plane; its complement is spanned by e3.
        assert_eq!(report.hull_normals.len(), 1);
        assert_eq!(report.hull_normals[0][0], 0);
        assert_eq!(report.hull_normals[0][1], 0);
        assert_ne!(report.hull_normals[0][2], 0);
        // Two extreme rays, each a facet of the wedge; lifted normals must
        // be valid inequalities tight on exactly one generator.
        assert_eq!(report.facets.len(), 2);
        for f in &report.facets {
            assert_eq!(f.tight_generators.len(), 1);
            for g in [[1i64, 0, 0], [1, 1, 0]] {
                let dot: i64 = g.iter().zip(&f.nu).map(|(a, b)| a * b).sum();
                assert!(dot >= 0);
            }
        }
        // The low-dimensional discrete-convexity search accepts the wedge:
        // (0,1,0) and (1,-1,0) are sign normals for its facets.
        let verdict = crate::cone::is_discretely_convex(&cone_of(&["100", "110"])).unwrap();
        assert!(verdict.convex);
    }

    /// Brute-force oracle: a facet normal of a full-dimensional cone is a
    /// vector tight on a rank T-1 subset of generators and nonnegative on
    /// all of them.
    fn brute_force_facets(cone: &PolyhedralCone) -> Vec<Vec<i64>> {
        let t = cone.ambient_dim();
        let gens: Vec<Vec<BigRational>> = cone
            .generators()
            .iter()
            .map(|s| to_rational(&s.to_i64_vec().iter().map(|&v| v as i128).collect::<Vec<_>>()))
            .collect();
        let n = gens.len();
        let mut found: Vec<Vec<i64>> = Vec::new();
        // Enumerate all (t-1)-subsets of generators, solve for a normal.
        let mut subset: Vec<usize> = (0..t - 1).collect();
        loop {
            let rows: Vec<Vec<BigRational>> = subset.iter().map(|&i| gens[i].clone()).collect();
            let ns = nullspace(&rows, t);
            if ns.len() == 1 {
                for cand in [ns[0].clone(), ns[0].iter().map(|x| -x.clone()).collect()] {
                    let ok = gens.iter().all(|g| {
                        let d: BigRational =
                            g.iter().zip(&cand).map(|(a, b)| a * b).sum();
                        !d.is_negative()
                    });
                    if ok {
                        let p = primitive_integer(&cand).unwrap();
                        let p64: Vec<i64> = p.iter().map(|&v| v as i64).collect();
                        if !found.contains(&p64) {
                            found.push(p64);
                        }
                    }
                }
            }
            // next subset
            let mut i = t - 1;
            loop {
                if i == 0 {
                    found.sort();
                    return found;
                }
                i -= 1;
                if subset[i] + (t - 1 - i) < n {
                    subset[i] += 1;
                    for k in i + 1..t - 1 {
                        subset[k] = subset[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn dd_matches_subset_enumeration_oracle() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let t = rng.random_range(2..=4usize);
            let count = rng.random_range(t..=(t + 4));
            let mut spectra: BTreeSet<Spectrum> = BTreeSet::new();
            // Always include the simplicial chain so the cone is full rank.
            for k in 1..=t {
                spectra.insert(Spectrum::from_ones(t, &(0..k).collect::<Vec<_>>()));
            }
            for _ in 0..count {
                let bits: Vec<bool> = (0..t).map(|_| rng.random_bool(0.5)).collect();
                spectra.insert(Spectrum::from_bits(bits));
            }
            let cone = cone_from_spectra(&spectra);
            let report = facet_normals(&cone).unwrap();
            assert!(report.full_dimensional);
            let mut got: Vec<Vec<i64>> = report.facets.iter().map(|f| f.nu.clone()).collect();
            got.sort();
            let expected = brute_force_facets(&cone);
            assert_eq!(got, expected, "generators {:?}", cone.generators());
        }
    }

    #[test]
    fn facet_normals_are_primitive() {
        let report = facet_normals(&cone_of(&["110", "011", "111", "100"])).unwrap();
        for f in &report.facets {
            let mut g: i64 = 0;
            for &v in &f.nu {
                g = num_integer::gcd_i64(g, v.abs());
            }
            assert_eq!(g, 1, "facet {:?} not primitive", f.nu);
        }
    }

    mod num_integer {
        pub fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a.abs()
        }
    }
}
