//! In-place radix-2 FFT for power-of-two lengths.

use alloc::vec::Vec;

use crate::Complex64;

/// Forward transform, `X_k = Σ_j x_j e^{−2πi jk/N}`, unnormalized.
pub fn forward(data: &mut [Complex64]) {
    transform(data, -1.0);
}

/// Inverse transform including the `1/N` factor.
pub fn inverse(data: &mut [Complex64]) {
    transform(data, 1.0);
    let scale = 1.0 / data.len() as f64;
    for x in data.iter_mut() {
        *x *= scale;
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n < 2 {
        return;
    }
    // bit reversal
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| {
            let a = sign * 2.0 * core::f64::consts::PI * k as f64 / n as f64;
            Complex64::new(libm::cos(a), libm::sin(a))
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddles[k * step];
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Angular wavenumber of FFT bin `m` on a grid of `n` points spaced `dx`,
/// with bins above `n/2` folded to negative frequencies.
pub fn wavenumber(m: usize, n: usize, dx: f64) -> f64 {
    let signed = if m >= n / 2 { m as f64 - n as f64 } else { m as f64 };
    2.0 * core::f64::consts::PI * signed / (n as f64 * dx)
}
