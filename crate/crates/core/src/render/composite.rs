use crate::imaging::{check_dims, rgb_dims, DepthImage, DimensionMismatch, RgbImage};

/// Transplants the simulated contact difference onto a real background:
/// `clamp(sim - sim_background + real_background, 0, 255)` per channel.
pub fn composite_calibrated(
    sim: &RgbImage,
    sim_background: &RgbImage,
    real_background: &RgbImage,
) -> Result<RgbImage, DimensionMismatch> {
    let dims = rgb_dims(real_background);
    check_dims(dims, rgb_dims(sim))?;
    check_dims(dims, rgb_dims(sim_background))?;
    let mut out = real_background.clone();
    for ((o, s), b) in out.iter_mut().zip(sim.iter()).zip(sim_background.iter()) {
        let v = *s as i32 - *b as i32 + *o as i32;
        *o = v.clamp(0, 255) as u8;
    }
    Ok(out)
}

/// Row-major binary image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.width + i]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Mean pixel-centre coordinate of the set pixels.
    pub fn centroid(&self) -> Option<(f64, f64)> {
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
        for (k, _) in self.bits.iter().enumerate().filter(|(_, &b)| b) {
            sx += (k % self.width) as f64 + 0.5;
            sy += (k / self.width) as f64 + 0.5;
            n += 1;
        }
        (n > 0).then(|| (sx / n as f64, sy / n as f64))
    }

    /// Number of 4-connected components.
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.bits.len()];
        let mut stack = Vec::new();
        let mut count = 0;
        for start in 0..self.bits.len() {
            if !self.bits[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(k) = stack.pop() {
                let (i, j) = (k % self.width, k / self.width);
                let mut visit = |n: usize| {
                    if self.bits[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                };
                if i > 0 {
                    visit(k - 1);
                }
                if i + 1 < self.width {
                    visit(k + 1);
                }
                if j > 0 {
                    visit(k - self.width);
                }
                if j + 1 < self.height {
                    visit(k + self.width);
                }
            }
        }
        count
    }

    /// Square (Chebyshev) dilation by `radius` pixels.
    pub fn dilate(&self, radius: usize) -> Mask {
        let mut out = Mask::empty(self.width, self.height);
        let r = radius as isize;
        for (k, _) in self.bits.iter().enumerate().filter(|(_, &b)| b) {
            let (i, j) = ((k % self.width) as isize, (k / self.width) as isize);
            for y in (j - r).max(0)..=(j + r).min(self.height as isize - 1) {
                for x in (i - r).max(0)..=(i + r).min(self.width as isize - 1) {
                    out.bits[y as usize * self.width + x as usize] = true;
                }
            }
        }
        out
    }
}

/// Pixels whose depth departs from the undeformed background by more than
/// `threshold` meters.
pub fn contact_mask(
    depth: &DepthImage,
    background_depth: &DepthImage,
    threshold: f64,
) -> Result<Mask, DimensionMismatch> {
    check_dims(background_depth.dims(), depth.dims())?;
    let bits = depth
        .values
        .iter()
        .zip(&background_depth.values)
        .map(|(&d, &b)| (d as f64 - b as f64).abs() > threshold)
        .collect();
    Ok(Mask {
        width: depth.width,
        height: depth.height,
        bits,
    })
}
