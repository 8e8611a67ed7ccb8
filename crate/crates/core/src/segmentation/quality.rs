//! Full-reference image quality: PSNR and SSIM.

use super::image::RgbImage;
use crate::error::{Error, Result};

/// Side of the square, non-overlapping SSIM windows. Windows at the right and
/// bottom edges are truncated when the image size is not a multiple.
pub const SSIM_WINDOW: usize = 8;

const PEAK: f64 = 255.0;
const C1: f64 = (0.01 * PEAK) * (0.01 * PEAK);
const C2: f64 = (0.03 * PEAK) * (0.03 * PEAK);

fn same_shape(a: &RgbImage, b: &RgbImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::Input(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Peak signal-to-noise ratio in dB over all channels and pixels; identical
/// images give `+inf`.
pub fn psnr(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    same_shape(a, b)?;
    let mut sq = 0u64;
    for c in 0..3 {
        for (&x, &y) in a.channel(c).iter().zip(b.channel(c)) {
            let d = x as i64 - y as i64;
            sq += (d * d) as u64;
        }
    }
    if sq == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sq as f64 / (3 * a.width() * a.height()) as f64;
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

/// Mean SSIM over non-overlapping windows and the three channels. Window
/// statistics use population (1/N) moments.
pub fn ssim(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    same_shape(a, b)?;
    let (w, h) = (a.width(), a.height());
    let mut total = 0.0;
    let mut windows = 0usize;
    for c in 0..3 {
        let (pa, pb) = (a.channel(c), b.channel(c));
        for y0 in (0..h).step_by(SSIM_WINDOW) {
            for x0 in (0..w).step_by(SSIM_WINDOW) {
                let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
                let mut n = 0.0;
                for y in y0..(y0 + SSIM_WINDOW).min(h) {
                    for x in x0..(x0 + SSIM_WINDOW).min(w) {
                        let (u, v) = (pa[y * w + x] as f64, pb[y * w + x] as f64);
                        sa += u;
                        sb += v;
                        saa += u * u;
                        sbb += v * v;
                        sab += u * v;
                        n += 1.0;
                    }
                }
                let (ma, mb) = (sa / n, sb / n);
                let va = (saa / n - ma * ma).max(0.0);
                let vb = (sbb / n - mb * mb).max(0.0);
                let cov = sab / n - ma * mb;
                total += ((2.0 * ma * mb + C1) * (2.0 * cov + C2))
                    / ((ma * ma + mb * mb + C1) * (va + vb + C2));
                windows += 1;
            }
        }
    }
    Ok(total / windows as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn constant(w: usize, h: usize, v: u8) -> RgbImage {
        RgbImage::from_planes(w, h, [vec![v; w * h], vec![v; w * h], vec![v; w * h]]).unwrap()
    }

    #[test]
    fn psnr_examples() {
        let a = constant(4, 4, 9);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        assert_eq!(psnr(&constant(1, 1, 0), &constant(1, 1, 255)).unwrap(), 0.0);
        let v = psnr(&constant(5, 3, 100), &constant(5, 3, 101)).unwrap();
        assert!((v - 20.0 * 255f64.log10()).abs() < 1e-12);
        assert!((v - 48.1308).abs() < 1e-4);
        assert!(psnr(&constant(2, 2, 0), &constant(2, 3, 0)).is_err());
    }

    #[test]
    fn ssim_examples() {
        let a = constant(16, 16, 100);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        let ramp: Vec<u8> = (0..256).map(|k| k as u8).collect();
        let neg: Vec<u8> = ramp.iter().map(|v| 255 - v).collect();
        let img = RgbImage::from_planes(16, 16, [ramp.clone(), ramp.clone(), ramp]).unwrap();
        let inv = RgbImage::from_planes(16, 16, [neg.clone(), neg.clone(), neg]).unwrap();
        assert!((ssim(&img, &img).unwrap() - 1.0).abs() < 1e-12);
        assert!(ssim(&img, &inv).unwrap() < 1.0);
        assert!(ssim(&constant(16, 16, 0), &constant(16, 16, 255)).unwrap() < 1.0);
        assert!(ssim(&constant(2, 2, 0), &constant(3, 2, 0)).is_err());
    }

    #[test]
    fn ssim_handles_partial_windows() {
        let a = constant(10, 3, 50);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(
            a in proptest::collection::vec(any::<u8>(), 3 * 12 * 9),
            b in proptest::collection::vec(any::<u8>(), 3 * 12 * 9),
        ) {
            let a = RgbImage::from_interleaved(12, 9, &a).unwrap();
            let b = RgbImage::from_interleaved(12, 9, &b).unwrap();
            prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
            let s = ssim(&a, &b).unwrap();
            prop_assert!((s - ssim(&b, &a).unwrap()).abs() < 1e-12);
            prop_assert!((-1.0..=1.0 + 1e-12).contains(&s));
        }
    }
}
