use crate::imaging::{LinearImage, RgbImage};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Sigma used when only a kernel size is given (the usual computer-vision
/// convention for automatic sigma).
pub fn sigma_for_kernel(kernel: usize) -> f64 {
    0.3 * ((kernel as f64 - 1.0) * 0.5 - 1.0) + 0.8
}

/// Normalized 1-D Gaussian taps of odd length `kernel`.
pub fn gaussian_kernel(kernel: usize, sigma: f64) -> Vec<f64> {
    assert!(kernel % 2 == 1, "kernel size must be odd");
    let r = (kernel / 2) as isize;
    let mut taps: Vec<f64> = (-r..=r)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    taps
}

/// Separable Gaussian blur with clamp-to-edge borders. `kernel = 1` is the
/// identity.
pub fn gaussian_blur_linear(img: &LinearImage, kernel: usize, sigma: f64) -> LinearImage {
    if kernel <= 1 || img.width == 0 || img.height == 0 {
        return img.clone();
    }
    let taps: Vec<f32> = gaussian_kernel(kernel, sigma).iter().map(|&t| t as f32).collect();
    let r = (kernel / 2) as isize;
    let (w, h) = (img.width, img.height);
    let mut tmp = vec![[0.0f32; 3]; w * h];
    for y in 0..h {
        let row = &img.pixels[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = [0.0f32; 3];
            for (k, t) in taps.iter().enumerate() {
                let sx = (x as isize + k as isize - r).clamp(0, w as isize - 1) as usize;
                let p = row[sx];
                acc[0] += t * p[0];
                acc[1] += t * p[1];
                acc[2] += t * p[2];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = LinearImage::black(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0f32; 3];
            for (k, t) in taps.iter().enumerate() {
                let sy = (y as isize + k as isize - r).clamp(0, h as isize - 1) as usize;
                let p = tmp[sy * w + x];
                acc[0] += t * p[0];
                acc[1] += t * p[1];
                acc[2] += t * p[2];
            }
            out.pixels[y * w + x] = acc;
        }
    }
    out
}

pub fn gaussian_blur(img: &RgbImage, kernel: usize, sigma: f64) -> RgbImage {
    if kernel <= 1 {
        return img.clone();
    }
    gaussian_blur_linear(&LinearImage::from_rgb8(img), kernel, sigma).quantize()
}

/// Adds zero-mean Gaussian noise with standard deviation `std` (linear
/// units) to every channel, in row-major order, then clamps to [0, 1].
pub fn add_noise_linear(img: &mut LinearImage, std: f64, seed: u64) {
    if !(std > 0.0) {
        return;
    }
    let normal = Normal::new(0.0f32, std as f32).expect("finite positive std");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in img.pixels.iter_mut() {
        for c in p.iter_mut() {
            *c = (*c + normal.sample(&mut rng)).clamp(0.0, 1.0);
        }
    }
}

pub fn add_noise(img: &RgbImage, std: f64, seed: u64) -> RgbImage {
    if !(std > 0.0) {
        return img.clone();
    }
    let mut lin = LinearImage::from_rgb8(img);
    add_noise_linear(&mut lin, std, seed);
    lin.quantize()
}
