//! Dense 4x4 complex matrix helpers.

use crate::C64;

pub(crate) type Mat4 = [[C64; 4]; 4];

pub(crate) const ZERO4: Mat4 = [[C64::new(0.0, 0.0); 4]; 4];

pub(crate) fn identity4() -> Mat4 {
    let mut m = ZERO4;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub(crate) fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..4 {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub(crate) fn adjoint(a: &Mat4) -> Mat4 {
    let mut out = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub(crate) fn trace(a: &Mat4) -> C64 {
    (0..4).map(|i| a[i][i]).sum()
}

/// Eigen-decomposition of a Hermitian 4x4 matrix by cyclic Jacobi rotations.
///
/// Returns the (unsorted) eigenvalues and the unitary whose columns are the
/// matching eigenvectors. Only the Hermitian part of `a` is used.
pub(crate) fn hermitian_eigen(a: &Mat4) -> ([f64; 4], Mat4) {
    let mut m = *a;
    for i in 0..4 {
        for j in 0..4 {
            let h = 0.5 * (a[i][j] + a[j][i].conj());
            m[i][j] = h;
        }
    }
    let mut v = identity4();
    let scale: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; 4], v);
    }

    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-18 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = m[p][q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let tau = (m[q][q].re - m[p][p].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut g = identity4();
                g[p][p] = C64::new(c, 0.0);
                g[q][q] = C64::new(c, 0.0);
                g[p][q] = phase * s;
                g[q][p] = -phase.conj() * s;

                m = mul(&adjoint(&g), &mul(&m, &g));
                m[p][q] = C64::new(0.0, 0.0);
                m[q][p] = C64::new(0.0, 0.0);
                v = mul(&v, &g);
            }
        }
    }
    ([m[0][0].re, m[1][1].re, m[2][2].re, m[3][3].re], v)
}

/// Singular values of a complex 4x4 matrix by one-sided Jacobi, descending.
///
/// The columns are orthogonalized directly, so small singular values keep an
/// absolute accuracy near machine epsilon instead of its square root.
pub(crate) fn singular_values(a: &Mat4) -> [f64; 4] {
    let mut m = *a;
    let col_dot = |m: &Mat4, p: usize, q: usize| -> C64 { (0..4).map(|i| m[i][p].conj() * m[i][q]).sum() };
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let alpha = col_dot(&m, p, p).re;
                let beta = col_dot(&m, q, q).re;
                let gamma = col_dot(&m, p, q);
                let mag = gamma.norm();
                if mag <= 1e-300 || mag <= 1e-17 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for row in m.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * c - xq * (phase.conj() * s);
                    row[q] = xp * (phase * s) + xq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut out = [0.0; 4];
    for (k, v) in out.iter_mut().enumerate() {
        *v = col_dot(&m, k, k).re.max(0.0).sqrt();
    }
    out.sort_by(|x, y| y.total_cmp(x));
    out
}
