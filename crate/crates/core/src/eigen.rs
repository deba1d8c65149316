//! Spectral decomposition of small Hermitian operators.
//!
//! The `n × n` Hermitian matrix `A = X + iY` is embedded as the real symmetric
//! `2n × 2n` matrix `[[X, −Y], [Y, X]]` and diagonalized by cyclic Jacobi
//! rotations. Every eigenvalue of `A` appears twice in the embedding; a real
//! eigenvector `(x, y)` maps to the complex vector `x + iy`, and summing
//! `½ (x+iy)(x+iy)†` over a real eigenbasis yields the complex spectral
//! projectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::LabeledOperator;
use crate::{Complex64, ZERO};

/// Eigenvalues closer than this are merged into one spectral projector.
const DEGENERACY_TOL: f64 = 1e-9;

/// One eigenvalue with the projector onto its eigenspace.
#[derive(Clone, Debug)]
pub struct SpectralComponent {
    pub value: f64,
    pub projector: LabeledOperator,
}

pub fn hermitian_spectrum(op: &LabeledOperator) -> Result<Vec<SpectralComponent>> {
    if !op.is_hermitian(1e-10) {
        return Err(Error::InvalidCoupling("observable is not Hermitian"));
    }
    let n = op.dim();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = op.get(r, c);
            a[r * m + c] = z.re;
            a[(r + n) * m + (c + n)] = z.re;
            a[r * m + (c + n)] = -z.im;
            a[(r + n) * m + c] = z.im;
        }
    }
    let (values, vectors) = jacobi(&mut a, m);

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));

    let mut out: Vec<SpectralComponent> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match out.last() {
            Some(last) if (values[k] - last.value).abs() <= DEGENERACY_TOL => {
                members.last_mut().unwrap().push(k);
            }
            _ => {
                out.push(SpectralComponent { value: values[k], projector: LabeledOperator::zero(op.space()) });
                members.push(vec![k]);
            }
        }
    }
    for (comp, ks) in out.iter_mut().zip(&members) {
        comp.value = ks.iter().map(|&k| values[k]).sum::<f64>() / ks.len() as f64;
        let mut p = vec![ZERO; n * n];
        for &k in ks {
            let z: Vec<Complex64> =
                (0..n).map(|i| Complex64::new(vectors[i * m + k], vectors[(i + n) * m + k])).collect();
            for r in 0..n {
                for c in 0..n {
                    p[r * n + c] += 0.5 * z[r] * z[c].conj();
                }
            }
        }
        comp.projector = LabeledOperator::from_matrix(op.space(), p)?;
    }
    Ok(out)
}

/// Cyclic Jacobi on a symmetric row-major `m × m` matrix. Returns the
/// eigenvalues and the eigenvectors as columns of a row-major matrix.
fn jacobi(a: &mut [f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off: f64 = (0..m)
            .flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * m + q] * a[p * m + q])
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i * m + i]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{Path, Space};
    use crate::operator::Axis;

    fn reconstruct(spec: &[SpectralComponent], space: Space) -> (LabeledOperator, LabeledOperator) {
        let mut a = LabeledOperator::zero(space);
        let mut id = LabeledOperator::zero(space);
        for c in spec {
            a = &a + &c.projector.scale(Complex64::new(c.value, 0.0));
            id = &id + &c.projector;
        }
        (a, id)
    }

    #[test]
    fn observables_decompose() {
        let s = Space::SYSTEM;
        let ops = [
            LabeledOperator::sigma_in_arm(Axis::Y, Path::R, s).unwrap(),
            LabeledOperator::sigma_in_arm(Axis::X, Path::L, s).unwrap(),
            LabeledOperator::path_projector(Path::L, s).unwrap(),
            LabeledOperator::identity(s),
        ];
        for op in &ops {
            let spec = hermitian_spectrum(op).unwrap();
            let (a, id) = reconstruct(&spec, s);
            assert!(a.max_abs_diff(op).unwrap() < 1e-12);
            assert!(id.max_abs_diff(&LabeledOperator::identity(s)).unwrap() < 1e-12);
            for c in &spec {
                let p2 = &c.projector * &c.projector;
                assert!(p2.max_abs_diff(&c.projector).unwrap() < 1e-12);
            }
        }
        let sy = hermitian_spectrum(&ops[0]).unwrap();
        let values: Vec<f64> = sy.iter().map(|c| c.value).collect();
        assert_eq!(values.len(), 3);
        assert!((values[0] + 1.0).abs() < 1e-12 && values[1].abs() < 1e-12 && (values[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generic_hermitian_matrix() {
        let s = Space::SYSTEM;
        let raw = LabeledOperator::from_fn(s, |r, c| {
            let i = s.index_of(r).unwrap() as f64;
            let j = s.index_of(c).unwrap() as f64;
            Complex64::new(libm::sin(i + j + 1.0), libm::cos(3.0 * i - j))
        });
        let h = &raw + &raw.adjoint();
        let spec = hermitian_spectrum(&h).unwrap();
        let (a, _) = reconstruct(&spec, s);
        assert!(a.max_abs_diff(&h).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let s = Space::PATH;
        let m = LabeledOperator::from_matrix(s, vec![ZERO, Complex64::new(1.0, 0.0), ZERO, ZERO]).unwrap();
        assert!(hermitian_spectrum(&m).is_err());
    }
}
