//! Small dense solves over f64/Complex64 used by the branch enumeration:
//! sphere intersection (d quadrics reduced to d-1 linear equations plus one
//! quadratic) and Newton refinement of a full placement.
//!
//! All arithmetic runs in Complex64. Real-field inputs have exactly zero
//! imaginary parts, and the +,-,*,/ kernels preserve that, so the real
//! branch logic can test `re` directly.

use num_complex::Complex64;

use super::{EnumerateError, Tolerances};
use crate::field::NumField;

pub type C = Complex64;

pub fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn degenerate(ctx: &str) -> EnumerateError {
    EnumerateError::GenericityFailure(ctx.to_string())
}

/// Solves the square system `a x = b` by LU with partial pivoting on
/// modulus. `a` and `b` are consumed as scratch space.
pub fn solve_linear(
    a: &mut [Vec<C>],
    b: &mut [C],
    pivot_tol: f64,
) -> Result<Vec<C>, EnumerateError> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let (p, best) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty pivot search");
        if best < pivot_tol {
            return Err(degenerate("singular linear system"));
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            if f == C::new(0.0, 0.0) {
                continue;
            }
            for c in col..n {
                let upper = a[col][c];
                a[r][c] -= f * upper;
            }
            let upper = b[col];
            b[r] -= f * upper;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in (r + 1)..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

/// Intersection of d spheres in dimension d: centres `c_i`, squared radii
/// `l_i` under the bilinear form. Subtracting the first equation from the
/// others leaves d-1 linear equations; the solution line is substituted
/// back into the first sphere, giving at most two points.
///
/// Real field: a negative discriminant means the branch has no real
/// points (empty vec); a discriminant inside the degeneracy tolerance is
/// a genericity failure. Complex field: both principal-branch roots.
pub fn sphere_intersection(
    centers: &[Vec<C>],
    lengths: &[C],
    field: NumField,
    tol: &Tolerances,
) -> Result<Vec<Vec<C>>, EnumerateError> {
    let d = centers.len();
    debug_assert!(d >= 1 && lengths.len() == d);
    debug_assert!(centers.iter().all(|c| c.len() == d));

    // Point on the affine solution set and a direction spanning it.
    let (x0, u) = if d == 1 {
        (vec![centers[0][0]], vec![C::new(1.0, 0.0)])
    } else {
        let c0 = &centers[0];
        let n0 = dot(c0, c0);
        let mut rows: Vec<Vec<C>> = Vec::with_capacity(d - 1);
        let mut rhs: Vec<C> = Vec::with_capacity(d - 1);
        for i in 1..d {
            let ci = &centers[i];
            rows.push((0..d).map(|j| 2.0 * (ci[j] - c0[j])).collect());
            rhs.push(lengths[0] - lengths[i] - n0 + dot(ci, ci));
        }
        solve_underdetermined_line(&mut rows, &mut rhs, tol.degeneracy)?
    };

    // ||x0 + s u - c0||^2 = l0 as a quadratic in s.
    let w: Vec<C> = (0..d).map(|j| x0[j] - centers[0][j]).collect();
    let qa = dot(&u, &u);
    let qb = 2.0 * dot(&u, &w);
    let qc = dot(&w, &w) - lengths[0];
    if qa.norm() < tol.degeneracy {
        return Err(degenerate("isotropic search direction"));
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc.norm() < tol.degeneracy {
        return Err(degenerate("near-double sphere intersection"));
    }
    let roots: Vec<C> = match field {
        NumField::Real => {
            if disc.re < 0.0 {
                return Ok(Vec::new());
            }
            let r = C::new(disc.re.sqrt(), 0.0);
            vec![(-qb + r) / (2.0 * qa), (-qb - r) / (2.0 * qa)]
        }
        NumField::Complex => {
            let r = disc.sqrt();
            vec![(-qb + r) / (2.0 * qa), (-qb - r) / (2.0 * qa)]
        }
    };
    Ok(roots
        .into_iter()
        .map(|s| (0..d).map(|j| x0[j] + s * u[j]).collect())
        .collect())
}

/// Solves a full-rank (d-1) x d system, returning a particular solution
/// (free variable 0) and a spanning direction of the kernel (free
/// variable 1).
fn solve_underdetermined_line(
    rows: &mut [Vec<C>],
    rhs: &mut [C],
    pivot_tol: f64,
) -> Result<(Vec<C>, Vec<C>), EnumerateError> {
    let m = rows.len();
    let d = m + 1;
    let mut pivot_col = vec![usize::MAX; m];
    let mut col_used = vec![false; d];
    for r in 0..m {
        let (pr, pc, best) = (r..m)
            .flat_map(|rr| (0..d).filter(|&cc| !col_used[cc]).map(move |cc| (rr, cc)))
            .map(|(rr, cc)| (rr, cc, rows[rr][cc].norm()))
            .max_by(|x, y| x.2.total_cmp(&y.2))
            .expect("pivot search space nonempty");
        if best < pivot_tol {
            return Err(degenerate("affinely dependent sphere centres"));
        }
        rows.swap(r, pr);
        rhs.swap(r, pr);
        col_used[pc] = true;
        pivot_col[r] = pc;
        for rr in 0..m {
            if rr != r {
                let f = rows[rr][pc] / rows[r][pc];
                if f != C::new(0.0, 0.0) {
                    for cc in 0..d {
                        let v = rows[r][cc];
                        rows[rr][cc] -= f * v;
                    }
                    let v = rhs[r];
                    rhs[rr] -= f * v;
                }
            }
        }
    }
    let free = (0..d).find(|&c| !col_used[c]).expect("one free column");
    let mut x0 = vec![C::new(0.0, 0.0); d];
    let mut u = vec![C::new(0.0, 0.0); d];
    u[free] = C::new(1.0, 0.0);
    for r in 0..m {
        let pc = pivot_col[r];
        x0[pc] = rhs[r] / rows[r][pc];
        u[pc] = -rows[r][free] / rows[r][pc];
    }
    Ok((x0, u))
}

/// One edge equation of the placement system.
pub struct EdgeEquation {
    /// Unknown-slot index of the vertex being constrained.
    pub slot: usize,
    /// Either a fixed point or another unknown slot.
    pub other: Anchor,
    pub length: C,
}

pub enum Anchor {
    Fixed(Vec<C>),
    Slot(usize),
}

/// Newton iteration on the square system of defining edge equations.
/// `x` holds one d-vector per unknown slot, flattened updates in place.
pub fn newton_refine(
    x: &mut [Vec<C>],
    equations: &[EdgeEquation],
    d: usize,
    tol: &Tolerances,
) -> Result<(), EnumerateError> {
    let slots = x.len();
    let n = slots * d;
    debug_assert_eq!(equations.len(), n);
    for _ in 0..tol.max_newton_iters {
        let mut residual = vec![C::new(0.0, 0.0); n];
        let mut worst = 0.0f64;
        let mut jac: Vec<Vec<C>> = vec![vec![C::new(0.0, 0.0); n]; n];
        for (row, eq) in equations.iter().enumerate() {
            let other = match &eq.other {
                Anchor::Fixed(p) => p.clone(),
                Anchor::Slot(s) => x[*s].clone(),
            };
            let diff: Vec<C> = (0..d).map(|j| x[eq.slot][j] - other[j]).collect();
            let f = dot(&diff, &diff) - eq.length;
            residual[row] = -f;
            worst = worst.max(f.norm());
            for j in 0..d {
                jac[row][eq.slot * d + j] += 2.0 * diff[j];
                if let Anchor::Slot(s) = eq.other {
                    jac[row][s * d + j] -= 2.0 * diff[j];
                }
            }
        }
        if worst < 1e-13 {
            return Ok(());
        }
        let delta = solve_linear(&mut jac, &mut residual, tol.degeneracy)?;
        for s in 0..slots {
            for j in 0..d {
                x[s][j] += delta[s * d + j];
            }
        }
    }
    // Converged enough if the loop ended just short of the early return.
    Ok(())
}
