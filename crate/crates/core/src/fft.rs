//! In-place complex FFT: iterative radix-2 for powers of two, Bluestein's
//! chirp-z otherwise. Forward uses `e^{-2πijk/N}`; the inverse is scaled by
//! `1/N`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

pub(crate) fn fft(data: &mut [C64]) {
    transform(data, -1.0);
}

pub(crate) fn ifft(data: &mut [C64]) {
    transform(data, 1.0);
    let s = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|x| *x *= s);
}

fn transform(data: &mut [C64], sign: f64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, sign);
    } else {
        bluestein(data, sign);
    }
}

fn radix2(a: &mut [C64], sign: f64) {
    let n = a.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        // twiddles computed directly rather than by recurrence
        let tw: Vec<C64> = (0..len / 2).map(|k| C64::new((ang * k as f64).cos(), (ang * k as f64).sin())).collect();
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = a[start + k + len / 2] * tw[k];
                a[start + k] = u + v;
                a[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

fn bluestein(a: &mut [C64], sign: f64) {
    let n = a.len();
    let m = (2 * n - 1).next_power_of_two();
    // chirp w_k = e^{sign·iπk²/n}; k² reduced mod 2n to keep the angle small
    let chirp: Vec<C64> = (0..n)
        .map(|k| {
            let k2 = (k as u128 * k as u128 % (2 * n as u128)) as f64;
            let ang = sign * PI * k2 / n as f64;
            C64::new(ang.cos(), ang.sin())
        })
        .collect();
    let mut x = vec![C64::new(0.0, 0.0); m];
    for k in 0..n {
        x[k] = a[k] * chirp[k];
    }
    let mut y = vec![C64::new(0.0, 0.0); m];
    y[0] = chirp[0].conj();
    for k in 1..n {
        y[k] = chirp[k].conj();
        y[m - k] = chirp[k].conj();
    }
    radix2(&mut x, -1.0);
    radix2(&mut y, -1.0);
    for (xi, yi) in x.iter_mut().zip(&y) {
        *xi *= yi;
    }
    radix2(&mut x, 1.0);
    let s = 1.0 / m as f64;
    for k in 0..n {
        a[k] = x[k] * s * chirp[k];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[C64], sign: f64) -> Vec<C64> {
        let n = a.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let ang = sign * 2.0 * PI * (j * k % n) as f64 / n as f64;
                        a[j] * C64::new(ang.cos(), ang.sin())
                    })
                    .sum()
            })
            .collect()
    }

    fn sample(n: usize) -> Vec<C64> {
        (0..n).map(|j| C64::new((j as f64 * 0.37).sin(), (j as f64 * 1.3).cos() - 0.2)).collect()
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1, 2, 8, 64, 3, 7, 12, 100] {
            let a = sample(n);
            let mut b = a.clone();
            fft(&mut b);
            let want = naive(&a, -1.0);
            for (x, y) in b.iter().zip(&want) {
                assert!((x - y).norm() < 1e-10 * (n as f64), "n={n}");
            }
        }
    }

    #[test]
    fn roundtrip() {
        for n in [16, 1024, 33, 1000] {
            let a = sample(n);
            let mut b = a.clone();
            fft(&mut b);
            ifft(&mut b);
            for (x, y) in b.iter().zip(&a) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
