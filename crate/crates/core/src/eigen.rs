//! Eigenvalues of small dense real matrices.
//!
//! Householder reduction to upper Hessenberg form followed by the implicit
//! double-shift QR iteration, in the formulation used by EISPACK `hqr` and
//! JAMA. Only eigenvalues are computed; no vectors are accumulated.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::systems::Matrix5;
use crate::types::EigenSet;

/// Entries at or below this magnitude count as zero for the triangular
/// fast path.
pub const TRIANGULAR_TOL: f64 = 1e-14;

/// QR sweeps allowed per unit of dimension.
pub const ITERATIONS_PER_DIM: usize = 100;

/// All eigenvalues of the 5x5 matrix `m`.
pub fn eigvals_general(m: &Matrix5) -> Result<EigenSet> {
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
    let vals = eigenvalues(&rows)?;
    let mut out = [Complex64::new(0.0, 0.0); 5];
    out.copy_from_slice(&vals);
    Ok(EigenSet::new(out))
}

/// All eigenvalues of a square matrix given as rows.
///
/// Triangular input (within [`TRIANGULAR_TOL`]) returns its diagonal
/// directly. Otherwise the order of the returned values follows deflation
/// from the bottom of the Hessenberg form and is not sorted.
pub fn eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { step: None });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if is_triangular(rows) {
        return Ok((0..n).map(|i| Complex64::new(rows[i][i], 0.0)).collect());
    }
    let mut h = rows.to_vec();
    reduce_to_hessenberg(&mut h);
    hessenberg_qr(h)
}

fn is_triangular(a: &[Vec<f64>]) -> bool {
    let n = a.len();
    let upper = (0..n).all(|i| (0..i).all(|j| a[i][j].abs() <= TRIANGULAR_TOL));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| a[i][j].abs() <= TRIANGULAR_TOL));
    upper || lower
}

/// Orthogonal similarity reduction to upper Hessenberg form, in place.
#[allow(clippy::needless_range_loop)]
fn reduce_to_hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i][j];
            }
            f /= hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for row in h.iter_mut() {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * row[j];
            }
            f /= hh;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }
    for i in 2..n {
        for j in 0..i - 1 {
            h[i][j] = 0.0;
        }
    }
}

/// Shifted QR on an upper Hessenberg matrix.
#[allow(clippy::many_single_char_names, clippy::needless_range_loop)]
fn hessenberg_qr(mut h: Vec<Vec<f64>>) -> Result<Vec<Complex64>> {
    let nn = h.len();
    let budget = ITERATIONS_PER_DIM * nn;
    let eps = f64::EPSILON;
    let mut re = vec![0.0; nn];
    let mut im = vec![0.0; nn];

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }

    let mut n = nn as isize - 1;
    let mut exshift = 0.0;
    let (mut w, mut x, mut y);
    let mut iter = 0usize;
    let mut total = 0usize;

    while n >= 0 {
        let nu = n as usize;
        let (mut p, mut q, mut r, mut s, mut z): (f64, f64, f64, f64, f64);
        // smallest l such that the active block is rows l..=n
        let mut l = nu;
        while l > 0 {
            s = h[l - 1][l - 1].abs() + h[l][l].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[l][l - 1].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            h[nu][nu] += exshift;
            re[nu] = h[nu][nu];
            im[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            w = h[nu][nu - 1] * h[nu - 1][nu];
            p = (h[nu - 1][nu - 1] - h[nu][nu]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[nu][nu] += exshift;
            h[nu - 1][nu - 1] += exshift;
            x = h[nu][nu];
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                re[nu - 1] = x + z;
                re[nu] = re[nu - 1];
                if z != 0.0 {
                    re[nu] = x - w / z;
                }
                im[nu - 1] = 0.0;
                im[nu] = 0.0;
            } else {
                re[nu - 1] = x + p;
                re[nu] = x + p;
                im[nu - 1] = z;
                im[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            if total >= budget {
                let partial = (nu + 1..nn).map(|i| Complex64::new(re[i], im[i])).collect();
                return Err(Error::NoConvergence {
                    iterations: total,
                    partial,
                });
            }
            x = h[nu][nu];
            y = h[nu - 1][nu - 1];
            w = h[nu][nu - 1] * h[nu - 1][nu];

            // exceptional shifts to break cycles
            if iter == 10 {
                exshift += x;
                for i in 0..=nu {
                    h[i][i] -= x;
                }
                s = h[nu][nu - 1].abs() + h[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in 0..=nu {
                        h[i][i] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            total += 1;

            // two consecutive small subdiagonal elements
            let mut m = nu - 2;
            loop {
                z = h[m][m];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[m + 1][m] + h[m][m + 1];
                q = h[m + 1][m + 1] - z - r - s;
                r = h[m + 2][m + 1];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[m][m - 1].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[m - 1][m - 1].abs() + z.abs() + h[m + 1][m + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                h[i][i - 2] = 0.0;
                if i > m + 2 {
                    h[i][i - 3] = 0.0;
                }
            }

            // double QR step on rows l..=n, columns m..=n
            for k in m..nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[k][k - 1];
                    q = h[k + 1][k - 1];
                    r = if notlast { h[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[k][k - 1] = -s * x;
                    } else if l != m {
                        h[k][k - 1] = -h[k][k - 1];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[k][j] + q * h[k + 1][j];
                        if notlast {
                            p += r * h[k + 2][j];
                            h[k + 2][j] -= p * z;
                        }
                        h[k][j] -= p * x;
                        h[k + 1][j] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[i][k] + y * h[i][k + 1];
                        if notlast {
                            p += z * h[i][k + 2];
                            h[i][k + 2] -= p * r;
                        }
                        h[i][k] -= p;
                        h[i][k + 1] -= p * q;
                    }
                }
            }
        }
    }

    Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
}

/// Largest distance between matched eigenvalues of two spectra.
///
/// Each value of `a` is paired greedily with the nearest unused value of
/// `b`; returns `f64::INFINITY` when the lengths differ.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for va in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, vb)| (i, (va - vb).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let mut m = [[0.0; 5]; 5];
        for i in 0..5 {
            m[i][i] = (i + 1) as f64;
        }
        let e = eigvals_general(&m).unwrap();
        let expected: Vec<Complex64> = (1..=5).map(|v| c(v as f64, 0.0)).collect();
        assert_eq!(spectrum_distance(e.lambdas(), &expected), 0.0);
    }

    #[test]
    fn companion_of_x5_minus_one() {
        // companion matrix: ones on the subdiagonal, last column (1, 0, 0, 0, 0)
        let mut m = [[0.0; 5]; 5];
        for i in 1..5 {
            m[i][i - 1] = 1.0;
        }
        m[0][4] = 1.0;
        let e = eigvals_general(&m).unwrap();
        let roots: Vec<Complex64> = (0..5)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 5.0))
            .collect();
        assert!(spectrum_distance(e.lambdas(), &roots) < 1e-9);
    }

    #[test]
    fn complex_pair_block() {
        // rotation-scaling block with eigenvalues 1 +- 2i, plus a coupled tail
        let rows = vec![
            vec![1.0, -2.0, 0.3, 0.0],
            vec![2.0, 1.0, 0.0, 0.1],
            vec![0.5, 0.0, -3.0, 1.0],
            vec![0.0, 0.2, 0.0, 4.0],
        ];
        let vals = eigenvalues(&rows).unwrap();
        // trace and determinant are preserved by similarity
        let trace: Complex64 = vals.iter().sum();
        assert!((trace - c(3.0, 0.0)).norm() < 1e-12);
        assert_eq!(vals.iter().filter(|v| v.im.abs() > 1e-6).count(), 2);
    }

    #[test]
    fn lower_triangular_fast_path() {
        let rows = vec![vec![2.0, 0.0, 0.0], vec![5.0, -1.0, 0.0], vec![7.0, 8.0, 3.0]];
        let vals = eigenvalues(&rows).unwrap();
        assert_eq!(vals, vec![c(2.0, 0.0), c(-1.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigenvalues(&[vec![1.0, 2.0]]).is_err());
        assert!(eigenvalues(&[vec![f64::NAN]]).is_err());
        assert!(eigenvalues(&[]).unwrap().is_empty());
    }

    #[test]
    fn two_by_two() {
        let vals = eigenvalues(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(spectrum_distance(&vals, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-15);
    }
}
