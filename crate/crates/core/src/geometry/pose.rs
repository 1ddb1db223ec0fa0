use nalgebra::{Quaternion, UnitQuaternion, Vector3};

pub type Vec3 = Vector3<f64>;

/// Rigid transform: rotation followed by translation.
///
/// Quaternions use the (w, x, y, z) order with the Hamilton product and are
/// renormalized after every composition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub translation: Vec3,
    pub rotation: UnitQuaternion<f64>,
}

impl Default for Pose {
    fn default() -> Self {
        Self::identity()
    }
}

impl Pose {
    pub fn identity() -> Self {
        Self {
            translation: Vec3::zeros(),
            rotation: UnitQuaternion::identity(),
        }
    }

    pub fn new(translation: Vec3, rotation: UnitQuaternion<f64>) -> Self {
        Self {
            translation,
            rotation,
        }
    }

    pub fn from_translation(translation: Vec3) -> Self {
        Self::new(translation, UnitQuaternion::identity())
    }

    /// Builds a pose from a position and a `[w, x, y, z]` quaternion.
    ///
    /// The quaternion is kept bit-for-bit when it is already unit length to
    /// within 1e-12, otherwise it is normalized. Returns `None` for a zero or
    /// non-finite quaternion.
    pub fn from_parts(position: [f64; 3], wxyz: [f64; 4]) -> Option<Self> {
        let [w, x, y, z] = wxyz;
        let q = Quaternion::new(w, x, y, z);
        let norm2 = q.norm_squared();
        if !norm2.is_finite() || norm2 < 1e-24 || position.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let rotation = if (norm2 - 1.0).abs() <= 1e-12 {
            UnitQuaternion::new_unchecked(q)
        } else {
            UnitQuaternion::new_normalize(q)
        };
        Some(Self::new(Vec3::from(position), rotation))
    }

    pub fn position_array(&self) -> [f64; 3] {
        [self.translation.x, self.translation.y, self.translation.z]
    }

    pub fn quaternion_wxyz(&self) -> [f64; 4] {
        let q = self.rotation.quaternion();
        [q.w, q.i, q.j, q.k]
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        compose(self, other)
    }

    pub fn inverse(&self) -> Pose {
        let rotation = self.rotation.inverse();
        Pose {
            translation: -(rotation * self.translation),
            rotation,
        }
    }

    #[inline]
    pub fn transform_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    #[inline]
    pub fn transform_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }
}

/// Rigid composition `a ∘ b` (b applied first).
pub fn compose(a: &Pose, b: &Pose) -> Pose {
    let q = a.rotation.quaternion() * b.rotation.quaternion();
    Pose {
        translation: a.rotation * b.translation + a.translation,
        rotation: UnitQuaternion::new_normalize(q),
    }
}

/// `R·p + t`.
pub fn transform_point(pose: &Pose, p: &Vec3) -> Vec3 {
    pose.transform_point(p)
}
