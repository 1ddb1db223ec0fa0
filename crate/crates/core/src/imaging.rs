//! Image buffers and their on-disk formats (PNG for colour, PFM for depth).

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

pub use image::RgbImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected {expected:?}, found {found:?}")]
pub struct DimensionMismatch {
    pub expected: (usize, usize),
    pub found: (usize, usize),
}

pub fn check_dims(expected: (usize, usize), found: (usize, usize)) -> Result<(), DimensionMismatch> {
    if expected == found {
        Ok(())
    } else {
        Err(DimensionMismatch { expected, found })
    }
}

pub fn rgb_dims(img: &RgbImage) -> (usize, usize) {
    (img.width() as usize, img.height() as usize)
}

/// Camera-frame depth in meters, row-major. Pixels without a surface carry
/// the far-clip sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f32>,
    pub far: f32,
}

impl DepthImage {
    pub fn filled(width: usize, height: usize, far: f32) -> Self {
        Self {
            width,
            height,
            values: vec![far; width * height],
            far,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f32 {
        self.values[j * self.width + i]
    }

    #[inline]
    pub fn is_background(&self, i: usize, j: usize) -> bool {
        !(self.get(i, j) < self.far)
    }
}

/// Linear-light RGB image, one `[f32; 3]` per pixel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[f32; 3]>,
}

impl LinearImage {
    pub fn black(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![[0.0; 3]; width * height],
        }
    }

    pub fn from_rgb8(img: &RgbImage) -> Self {
        Self {
            width: img.width() as usize,
            height: img.height() as usize,
            pixels: img
                .pixels()
                .map(|p| p.0.map(|c| c as f32 / 255.0))
                .collect(),
        }
    }

    /// Clamps to [0, 1] and quantizes with `round(v·255)`, halves rounding up.
    pub fn quantize(&self) -> RgbImage {
        let mut out = RgbImage::new(self.width as u32, self.height as u32);
        for (dst, src) in out.pixels_mut().zip(&self.pixels) {
            dst.0 = src.map(quantize_channel);
        }
        out
    }
}

#[inline]
pub fn quantize_channel(v: f32) -> u8 {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * 255.0 + 0.5).floor() as u8
}

#[derive(Debug, Error)]
pub enum ImageIoError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("image codec error: {0}")]
    Codec(#[from] image::ImageError),
    #[error("malformed PFM: {0}")]
    Pfm(String),
}

pub fn save_png(img: &RgbImage, path: impl AsRef<Path>) -> Result<(), ImageIoError> {
    img.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

pub fn load_png(path: impl AsRef<Path>) -> Result<RgbImage, ImageIoError> {
    Ok(image::open(path)?.to_rgb8())
}

/// Grayscale little-endian PFM (`Pf`, scale −1.0). Rows are stored bottom to
/// top as the format requires.
pub fn pfm_bytes(depth: &DepthImage) -> Vec<u8> {
    let mut out = format!("Pf\n{} {}\n-1.0\n", depth.width, depth.height).into_bytes();
    out.reserve(depth.values.len() * 4);
    for row in depth.values.chunks_exact(depth.width).rev() {
        for v in row {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn save_pfm(depth: &DepthImage, path: impl AsRef<Path>) -> Result<(), ImageIoError> {
    let mut f = io::BufWriter::new(fs::File::create(path)?);
    f.write_all(&pfm_bytes(depth))?;
    f.flush()?;
    Ok(())
}

/// Reads a `Pf` file. The sentinel of the returned image is `far`.
pub fn parse_pfm(bytes: &[u8], far: f32) -> Result<DepthImage, ImageIoError> {
    let bad = |m: &str| ImageIoError::Pfm(m.to_string());
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header not ascii"))?);
    }
    pos += 1; // single whitespace byte before the raster
    if fields[0] != "Pf" {
        return Err(bad("only grayscale 'Pf' is supported"));
    }
    let width: usize = fields[1].parse().map_err(|_| bad("bad width"))?;
    let height: usize = fields[2].parse().map_err(|_| bad("bad height"))?;
    let scale: f32 = fields[3].parse().map_err(|_| bad("bad scale"))?;
    let raster = bytes.get(pos..).ok_or_else(|| bad("missing raster"))?;
    if raster.len() != width * height * 4 {
        return Err(bad("raster size does not match header"));
    }
    let mut values = vec![0f32; width * height];
    for (r, row) in raster.chunks_exact(width * 4).enumerate() {
        let dst = height - 1 - r;
        for (i, px) in row.chunks_exact(4).enumerate() {
            let b: [u8; 4] = px.try_into().unwrap();
            values[dst * width + i] = if scale < 0.0 {
                f32::from_le_bytes(b)
            } else {
                f32::from_be_bytes(b)
            };
        }
    }
    Ok(DepthImage {
        width,
        height,
        values,
        far,
    })
}

pub fn load_pfm(path: impl AsRef<Path>, far: f32) -> Result<DepthImage, ImageIoError> {
    parse_pfm(&fs::read(path)?, far)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_rounds_half_up_and_clamps() {
        assert_eq!(quantize_channel(-0.2), 0);
        assert_eq!(quantize_channel(1.7), 255);
        assert_eq!(quantize_channel(0.5), 128);
        assert_eq!(quantize_channel(1.5 / 255.0), 2);
        assert_eq!(quantize_channel(f32::NAN), 0);
    }

    #[test]
    fn pfm_header_and_row_order() {
        let mut d = DepthImage::filled(3, 2, 0.05);
        d.values[0] = 0.01; // top-left
        let bytes = pfm_bytes(&d);
        assert!(bytes.starts_with(b"Pf\n3 2\n-1.0\n"));
        let header = b"Pf\n3 2\n-1.0\n".len();
        // top row is written last
        let last_row = &bytes[header + 12..header + 16];
        assert_eq!(f32::from_le_bytes(last_row.try_into().unwrap()), 0.01);
        assert_eq!(parse_pfm(&bytes, 0.05).unwrap(), d);
    }
}
