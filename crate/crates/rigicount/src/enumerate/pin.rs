//! Canonical pinning: realises the quotient by isometries concretely.
//!
//! The first pin vertex is translated to the origin and the offsets of the
//! next d pin vertices are Gram-Schmidt orthonormalised under the bilinear
//! form, with every square root taken on the principal branch. Vertex i of
//! the pin then lies in the span of the first i axes with its leading new
//! coordinate fixed by the branch choice; for real data that coordinate is
//! positive, which also pins the reflection.

use num_complex::Complex64;

use super::solve::{dot, C};
use super::EnumerateError;

/// Rewrites `coords` in the pinned frame determined by `pin` (d + 1
/// vertex indices, affinely independent in the realisation).
pub fn pin_solution(
    coords: &mut [Vec<C>],
    pin: &[usize],
    degeneracy_tol: f64,
) -> Result<(), EnumerateError> {
    let d = pin.len() - 1;
    let origin = coords[pin[0]].clone();
    for p in coords.iter_mut() {
        for j in 0..d {
            p[j] -= origin[j];
        }
    }
    let mut basis: Vec<Vec<C>> = Vec::with_capacity(d);
    for i in 1..=d {
        let mut v = coords[pin[i]].clone();
        for q in &basis {
            let coeff = dot(q, &v);
            for j in 0..d {
                v[j] -= coeff * q[j];
            }
        }
        let norm2 = dot(&v, &v);
        if norm2.norm() < degeneracy_tol {
            return Err(EnumerateError::GenericityFailure(
                "pin vertices are affinely dependent or isotropic".into(),
            ));
        }
        let scale = Complex64::new(1.0, 0.0) / norm2.sqrt();
        for j in 0..d {
            v[j] *= scale;
        }
        basis.push(v);
    }
    for p in coords.iter_mut() {
        let new: Vec<C> = basis.iter().map(|q| dot(q, p)).collect();
        p.copy_from_slice(&new);
    }
    Ok(())
}

/// Largest coordinate-wise distance between two pinned realisations.
pub fn placement_distance(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(pa, pb)| pa.iter().zip(pb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumField;

    #[test]
    fn congruent_inputs_pin_identically() {
        // A triangle plus one extra point, then the same set rotated and
        // translated; pinned coordinates must agree.
        let pts = [(0.3, -0.2), (1.1, 0.4), (-0.5, 0.9), (0.8, 1.3)];
        let mut original: Vec<Vec<C>> =
            pts.iter().map(|&(x, y)| vec![C::new(x, 0.0), C::new(y, 0.0)]).collect();
        let (s, c) = (0.6f64.sin(), 0.6f64.cos());
        let mut moved: Vec<Vec<C>> = pts
            .iter()
            .map(|&(x, y)| {
                vec![
                    C::new(c * x - s * y + 2.0, 0.0),
                    C::new(s * x + c * y - 0.7, 0.0),
                ]
            })
            .collect();
        pin_solution(&mut original, &[0, 1, 2], 1e-10).unwrap();
        pin_solution(&mut moved, &[0, 1, 2], 1e-10).unwrap();
        assert!(placement_distance(&original, &moved) < 1e-10);
        let _ = NumField::Real;
    }

    #[test]
    fn reflected_inputs_pin_identically() {
        let pts = [(0.3, -0.2), (1.1, 0.4), (-0.5, 0.9), (0.8, 1.3)];
        let mut original: Vec<Vec<C>> =
            pts.iter().map(|&(x, y)| vec![C::new(x, 0.0), C::new(y, 0.0)]).collect();
        let mut mirrored: Vec<Vec<C>> =
            pts.iter().map(|&(x, y)| vec![C::new(x, 0.0), C::new(-y, 0.0)]).collect();
        pin_solution(&mut original, &[0, 1, 2], 1e-10).unwrap();
        pin_solution(&mut mirrored, &[0, 1, 2], 1e-10).unwrap();
        assert!(placement_distance(&original, &mirrored) < 1e-10);
    }

    #[test]
    fn degenerate_pin_is_rejected() {
        let mut collinear: Vec<Vec<C>> = vec![
            vec![C::new(0.0, 0.0), C::new(0.0, 0.0)],
            vec![C::new(1.0, 0.0), C::new(0.0, 0.0)],
            vec![C::new(2.0, 0.0), C::new(0.0, 0.0)],
        ];
        assert!(pin_solution(&mut collinear, &[0, 1, 2], 1e-10).is_err());
    }
}
