use super::pose::Vec3;

/// Pinhole intrinsics with square pixels and the principal point at the
/// image centre. Camera frame: +z forward, +x right, +y down. Pixel (i, j)
/// has its centre at continuous coordinates (i + 0.5, j + 0.5).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pinhole {
    pub width: usize,
    pub height: usize,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub near: f64,
    pub far: f64,
}

impl Pinhole {
    pub fn from_fov(width: usize, height: usize, fov_y_rad: f64, near: f64, far: f64) -> Self {
        let fy = (height as f64 / 2.0) / (fov_y_rad / 2.0).tan();
        Self {
            width,
            height,
            fx: fy,
            fy,
            cx: width as f64 / 2.0,
            cy: height as f64 / 2.0,
            near,
            far,
        }
    }

    #[inline]
    pub fn project(&self, p: &Vec3) -> (f64, f64) {
        (self.fx * p.x / p.z + self.cx, self.fy * p.y / p.z + self.cy)
    }

    /// Camera-frame point seen through the centre of pixel (i, j) at depth z.
    #[inline]
    pub fn unproject(&self, i: usize, j: usize, z: f64) -> Vec3 {
        self.pixel_ray(i, j) * z
    }

    /// Direction through the centre of pixel (i, j), scaled so that z = 1.
    #[inline]
    pub fn pixel_ray(&self, i: usize, j: usize) -> Vec3 {
        Vec3::new(
            (i as f64 + 0.5 - self.cx) / self.fx,
            (j as f64 + 0.5 - self.cy) / self.fy,
            1.0,
        )
    }

    /// Half-width and half-height of the image plane at z = 1.
    pub fn half_extents(&self) -> (f64, f64) {
        (self.cx / self.fx, self.cy / self.fy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_inverts_unproject() {
        let cam = Pinhole::from_fov(32, 24, 60f64.to_radians(), 0.001, 1.0);
        let p = cam.unproject(5, 17, 0.3);
        let (u, v) = cam.project(&p);
        assert!((u - 5.5).abs() < 1e-12 && (v - 17.5).abs() < 1e-12);
        let (hx, hy) = cam.half_extents();
        assert!((hy - 30f64.to_radians().tan()).abs() < 1e-12);
        assert!((hx / hy - 32.0 / 24.0).abs() < 1e-12);
    }
}
