//! Dense 3x3 complex eigenmachinery.
//!
//! Everything here is closed-form plus polishing: a Cardano solve of the
//! characteristic cubic refined by Newton steps, nullspace eigenvectors
//! from row cross products, and a cyclic Jacobi diagonalizer for
//! Hermitian matrices (also used for singular values via M* M).

use crate::{cr, vec_norm, CMat3, CVec3, C};

/// Eigenvalue with the size of the root cluster it was merged from.
#[derive(Debug, Clone, Copy)]
pub struct Eigenvalue {
    pub value: C,
    pub multiplicity: usize,
}

fn char_poly_coeffs(m: &CMat3) -> (C, C, C) {
    // lambda^3 - c2 lambda^2 + c1 lambda - c0
    let c2 = m.trace();
    let m2 = m * m;
    let c1 = (c2 * c2 - m2.trace()) * cr(0.5);
    let c0 = m.determinant();
    (c2, c1, c0)
}

fn eval_cubic(c2: C, c1: C, c0: C, x: C) -> (C, C) {
    let p = ((x - c2) * x + c1) * x - c0;
    let dp = (cr(3.0) * x - cr(2.0) * c2) * x + c1;
    (p, dp)
}

/// Roots of lambda^3 - c2 lambda^2 + c1 lambda - c0 via Cardano with
/// Newton polish.  Accurate to rounding for separated roots; clustered
/// roots are merged by the caller.
fn cubic_roots(c2: C, c1: C, c0: C) -> [C; 3] {
    let third = cr(1.0 / 3.0);
    let shift = c2 * third;
    // depressed cubic mu^3 + p mu + q
    let p = c1 - c2 * c2 * third;
    let q = c2 * (c1 * third - cr(2.0 / 27.0) * c2 * c2) - c0;
    // mu^3 + p mu - (-q) ... Cardano with the larger-modulus branch
    let disc = (q * q * cr(0.25) + p * p * p * cr(1.0 / 27.0)).sqrt();
    let cand_a = -q * cr(0.5) + disc;
    let cand_b = -q * cr(0.5) - disc;
    let u3 = if cand_a.norm() >= cand_b.norm() {
        cand_a
    } else {
        cand_b
    };
    if u3.norm() == 0.0 {
        // q = 0 and p = 0: triple root of the depressed cubic at zero
        return [shift, shift, shift];
    }
    let mut roots = [C::new(0.0, 0.0); 3];
    let u = C::from_polar(u3.norm().powf(1.0 / 3.0), u3.arg() / 3.0);
    let omega = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut uk = u;
    for r in roots.iter_mut() {
        let v = -p * cr(1.0 / 3.0) / uk;
        *r = uk + v + shift;
        uk *= omega;
    }
    // Newton polish on the undepressed cubic
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (f, df) = eval_cubic(c2, c1, c0, *r);
            if df.norm() == 0.0 {
                break;
            }
            let step = f / df;
            *r -= step;
            if step.norm() < 1e-16 * (1.0 + r.norm()) {
                break;
            }
        }
    }
    roots
}

/// Eigenvalues of a complex 3x3 matrix, with nearby roots merged to
/// their cluster mean.  Root means are well conditioned even when the
/// individual roots of a multiple eigenvalue scatter by eps^(1/2) or
/// eps^(1/3), so merged values are reliable at the 1e-8 scale used by
/// isometry classification.
pub fn eigenvalues3(m: &CMat3) -> Vec<Eigenvalue> {
    let scale = m.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1.0);
    let (c2, c1, c0) = char_poly_coeffs(m);
    let roots = cubic_roots(c2, c1, c0);
    let cluster_radius = 1e-5 * scale;

    let mut used = [false; 3];
    let mut out = Vec::new();
    for i in 0..3 {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        for j in (i + 1)..3 {
            if !used[j] && (roots[j] - roots[i]).norm() <= cluster_radius {
                members.push(roots[j]);
                used[j] = true;
            }
        }
        let mean = members.iter().sum::<C>() / cr(members.len() as f64);
        out.push(Eigenvalue {
            value: mean,
            multiplicity: members.len(),
        });
    }
    // Recover cluster means from the trace: the root sum equals c2
    // exactly, and simple roots are polished to rounding, so the mean
    // of a multiple root is far better conditioned this way than as an
    // average of scattered Cardano roots.
    match out.len() {
        1 => out[0].value = c2 * cr(1.0 / 3.0),
        2 => {
            let (si, di) = if out[0].multiplicity == 1 { (0, 1) } else { (1, 0) };
            out[di].value = (c2 - out[si].value) * cr(0.5);
        }
        _ => {}
    }
    out
}

/// Bilinear cross product (no conjugation): orthogonal to both inputs
/// under the plain dot product.
pub(crate) fn bilinear_cross(u: &CVec3, v: &CVec3) -> CVec3 {
    CVec3::new(
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
}

/// Rows of a matrix as vectors.
pub(crate) fn rows3(a: &CMat3) -> [CVec3; 3] {
    [
        CVec3::new(a[(0, 0)], a[(0, 1)], a[(0, 2)]),
        CVec3::new(a[(1, 0)], a[(1, 1)], a[(1, 2)]),
        CVec3::new(a[(2, 0)], a[(2, 1)], a[(2, 2)]),
    ]
}

/// Unit eigenvector for a (well separated) eigenvalue: the nullspace of
/// M - lambda I recovered from the largest pairwise cross product of its
/// rows.  Returns None when all row cross products vanish (defective or
/// badly clustered input).
pub fn eigenvector3(m: &CMat3, lambda: C) -> Option<CVec3> {
    let a = m - CMat3::identity() * lambda;
    let rows = rows3(&a);
    let mut best: Option<CVec3> = None;
    let mut best_norm = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let x = bilinear_cross(&rows[i], &rows[j]);
        let n = vec_norm(&x);
        if n > best_norm {
            best_norm = n;
            best = Some(x / cr(n));
        }
    }
    let scale = m.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1.0);
    if best_norm <= 1e-13 * scale * scale {
        None
    } else {
        best
    }
}

/// Eigendecomposition of a Hermitian 3x3 matrix by cyclic Jacobi
/// rotations.  Returns eigenvalues ascending with matching orthonormal
/// eigenvectors as the columns of the returned matrix.
pub fn hermitian_eigen3(h: &CMat3) -> ([f64; 3], CMat3) {
    let mut a = *h;
    let mut v = CMat3::identity();
    let scale = h.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1e-300);

    for _sweep in 0..60 {
        let off = (a[(0, 1)].norm_sqr() + a[(0, 2)].norm_sqr() + a[(1, 2)].norm_sqr()).sqrt();
        if off <= 1e-16 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq.norm() <= 1e-18 * scale {
                continue;
            }
            let app = a[(p, p)].re;
            let aqq = a[(q, q)].re;
            // unitary 2x2 diagonalizing [[app, apq], [conj(apq), aqq]]
            let phi = apq / cr(apq.norm());
            let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
            let (s, c0) = theta.sin_cos();
            let cp = cr(c0);
            let sp = phi * cr(s);
            // columns p,q of the accumulated basis rotate by [[c, -s*phi],[conj(s*phi?)...]]
            let mut rot = CMat3::identity();
            rot[(p, p)] = cp;
            rot[(p, q)] = -sp;
            rot[(q, p)] = sp.conj();
            rot[(q, q)] = cp;
            a = rot.adjoint() * a * rot;
            v *= rot;
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..3).map(|k| (a[(k, k)].re, k)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let vals = [pairs[0].0, pairs[1].0, pairs[2].0];
    let mut vecs = CMat3::zeros();
    for (slot, &(_, col)) in pairs.iter().enumerate() {
        for r in 0..3 {
            vecs[(r, slot)] = v[(r, col)];
        }
    }
    (vals, vecs)
}

/// Singular values of a complex 3x3 matrix, ascending.
pub fn singular_values3(m: &CMat3) -> [f64; 3] {
    let (vals, _) = hermitian_eigen3(&(m.adjoint() * m));
    [
        vals[0].max(0.0).sqrt(),
        vals[1].max(0.0).sqrt(),
        vals[2].max(0.0).sqrt(),
    ]
}

/// Numerical rank with singular values below tol * largest treated as 0.
pub fn rank3(m: &CMat3, rel_tol: f64) -> usize {
    let sv = singular_values3(m);
    let top = sv[2];
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m = CMat3::from_diagonal(&CVec3::new(cr(0.5), cr(1.0), cr(2.0)));
        let mut vals: Vec<f64> = eigenvalues3(&m).iter().map(|e| e.value.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 0.5).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((vals[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_is_merged_with_accurate_mean() {
        let m = CMat3::from_diagonal(&CVec3::new(c(0.0, 1.0), cr(1.0), c(0.0, 1.0)));
        let eigs = eigenvalues3(&m);
        let double = eigs.iter().find(|e| e.multiplicity == 2).expect("cluster");
        assert!((double.value - c(0.0, 1.0)).norm() < 1e-10);
        // merged modulus must sit well inside the 1e-8 unit band
        assert!((double.value.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unipotent_matrix_has_triple_unit_eigenvalue() {
        let mut m = CMat3::identity();
        m[(0, 2)] = c(0.0, 1.0);
        let eigs = eigenvalues3(&m);
        assert_eq!(eigs.len(), 1);
        assert_eq!(eigs[0].multiplicity, 3);
        assert!((eigs[0].value - cr(1.0)).norm() < 1e-10);
    }

    #[test]
    fn eigenvector_of_generic_matrix() {
        let m = CMat3::new(
            c(1.0, 0.2),
            c(0.3, -0.1),
            c(0.0, 0.5),
            c(-0.2, 0.4),
            c(2.0, 0.0),
            c(0.1, 0.1),
            c(0.6, -0.3),
            c(0.0, 0.2),
            c(-1.0, 0.7),
        );
        for e in eigenvalues3(&m) {
            let v = eigenvector3(&m, e.value).expect("eigenvector");
            let r = m * v - v * e.value;
            assert!(vec_norm(&r) < 1e-9, "residual {}", vec_norm(&r));
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs_matrix() {
        let b = CMat3::new(
            c(1.0, 0.0),
            c(0.5, 0.3),
            c(-0.2, 0.8),
            c(0.5, -0.3),
            c(2.0, 0.0),
            c(0.1, -0.4),
            c(-0.2, -0.8),
            c(0.1, 0.4),
            c(0.7, 0.0),
        );
        let (vals, vecs) = hermitian_eigen3(&b);
        let d = CMat3::from_diagonal(&CVec3::new(cr(vals[0]), cr(vals[1]), cr(vals[2])));
        let rec = vecs * d * vecs.adjoint();
        let err = (b - rec).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(err < 1e-13, "reconstruction error {err}");
        // orthonormal columns
        let g = vecs.adjoint() * vecs;
        let id_err = (g - CMat3::identity())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!(id_err < 1e-13);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = CMat3::from_diagonal(&CVec3::new(cr(-3.0), c(0.0, 2.0), cr(1.0)));
        let sv = singular_values3(&m);
        assert!((sv[0] - 1.0).abs() < 1e-12);
        assert!((sv[1] - 2.0).abs() < 1e-12);
        assert!((sv[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_detects_nullspace() {
        let mut m = CMat3::identity();
        m[(2, 2)] = cr(0.0);
        assert_eq!(rank3(&m, 1e-8), 2);
        assert_eq!(rank3(&CMat3::identity(), 1e-8), 3);
    }
}
