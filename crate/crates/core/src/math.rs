//! Small fixed-size vector/matrix types used by the scene and rasterizer.
//!
//! Row-major, stack-allocated, generic over [`Scalar`]. Only the handful of
//! operations the splatting math needs are implemented.

use crate::scalar::{c, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

/// 2x2 symmetric-capable matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

/// 3x3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

/// Quaternion stored as (w, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
    pub fn zero() -> Self {
        Self { x: T::zero(), y: T::zero() }
    }
    pub fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
    pub fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }
}

impl<T: Scalar> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }
    pub fn zero() -> Self {
        Self { x: T::zero(), y: T::zero(), z: T::zero() }
    }
    pub fn splat(v: T) -> Self {
        Self { x: v, y: v, z: v }
    }
    pub fn from_array(a: [T; 3]) -> Self {
        Self { x: a[0], y: a[1], z: a[2] }
    }
    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
    pub fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
    pub fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }
    pub fn normalized(self) -> Self {
        let n = self.norm();
        self.scale(T::one() / n)
    }
    /// Outer product self * other^T.
    pub fn outer(self, o: Self) -> Mat3<T> {
        let a = self.to_array();
        let b = o.to_array();
        let mut m = [[T::zero(); 3]; 3];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                m[i][j] = ai * bj;
            }
        }
        Mat3 { m }
    }
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, cc: T, d: T) -> Self {
        Self { m: [[a, b], [cc, d]] }
    }
    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }
    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }
    pub fn inverse(&self) -> Self {
        let d = self.det();
        let inv = T::one() / d;
        Self::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        )
    }
    pub fn mul_vec(&self, v: Vec2<T>) -> Vec2<T> {
        Vec2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }
    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl<T: Scalar> Mat3<T> {
    pub fn identity() -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { m }
    }
    pub fn from_rows(r0: [T; 3], r1: [T; 3], r2: [T; 3]) -> Self {
        Self { m: [r0, r1, r2] }
    }
    pub fn diag(d: Vec3<T>) -> Self {
        let mut m = Self::default();
        m.m[0][0] = d.x;
        m.m[1][1] = d.y;
        m.m[2][2] = d.z;
        m
    }
    pub fn transpose(&self) -> Self {
        let mut t = Self::default();
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = T::zero();
                for (k, ok) in o.m.iter().enumerate() {
                    acc = acc + self.m[i][k] * ok[j];
                }
                r.m[i][j] = acc;
            }
        }
        r
    }
    pub fn mul_vec(&self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = self.m[i][j] + o.m[i][j];
            }
        }
        r
    }
    pub fn scale(&self, s: T) -> Self {
        let mut r = *self;
        for row in r.m.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * s;
            }
        }
        r
    }
    /// Frobenius inner product <self, other>.
    pub fn frobenius_dot(&self, o: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + self.m[i][j] * o.m[i][j];
            }
        }
        acc
    }
    pub fn column(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }
    /// Solve self * x = b by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: Vec3<T>) -> Vec3<T> {
        let mut a = self.m;
        let mut rhs = b.to_array();
        for col in 0..3 {
            let mut pivot = col;
            for row in col + 1..3 {
                if a[row][col].abs() > a[pivot][col].abs() {
                    pivot = row;
                }
            }
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            let p = a[col][col];
            for row in col + 1..3 {
                let f = a[row][col] / p;
                for k in col..3 {
                    a[row][k] = a[row][k] - f * a[col][k];
                }
                rhs[row] = rhs[row] - f * rhs[col];
            }
        }
        let mut x = [T::zero(); 3];
        for col in (0..3).rev() {
            let mut acc = rhs[col];
            for k in col + 1..3 {
                acc = acc - a[col][k] * x[k];
            }
            x[col] = acc / a[col][col];
        }
        Vec3::from_array(x)
    }
}

impl<T: Scalar> Quat<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }
    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }
    /// Rotation of `angle` radians about a (not necessarily unit) axis.
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let half = angle * c(0.5);
        let s = half.sin() / axis.norm();
        Self::new(half.cos(), axis.x * s, axis.y * s, axis.z * s)
    }
    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
    pub fn normalized(&self) -> Self {
        let inv = T::one() / self.norm();
        Self::new(self.w * inv, self.x * inv, self.y * inv, self.z * inv)
    }
    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }
    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
    /// Rotation matrix of the normalized quaternion.
    pub fn rotation_matrix(&self) -> Mat3<T> {
        let q = self.normalized();
        let (w, x, y, z) = (q.w, q.x, q.y, q.z);
        let two = c::<T>(2.0);
        Mat3::from_rows(
            [
                T::one() - two * (y * y + z * z),
                two * (x * y - w * z),
                two * (x * z + w * y),
            ],
            [
                two * (x * y + w * z),
                T::one() - two * (x * x + z * z),
                two * (y * z - w * x),
            ],
            [
                two * (x * z - w * y),
                two * (y * z + w * x),
                T::one() - two * (x * x + y * y),
            ],
        )
    }

    /// Partial derivatives of `rotation_matrix` with respect to each raw
    /// component of the (unnormalized) quaternion, including the Jacobian of
    /// the normalization itself.
    pub fn rotation_matrix_grads(&self) -> [Mat3<T>; 4] {
        let n = self.norm();
        let q = self.normalized();
        let (w, x, y, z) = (q.w, q.x, q.y, q.z);
        let two = c::<T>(2.0);
        // dR/d(unit components)
        let dr_dw = Mat3::from_rows(
            [T::zero(), -z, y],
            [z, T::zero(), -x],
            [-y, x, T::zero()],
        )
        .scale(two);
        let dr_dx = Mat3::from_rows(
            [T::zero(), y, z],
            [y, -two * x, -w],
            [z, w, -two * x],
        )
        .scale(two);
        let dr_dy = Mat3::from_rows(
            [-two * y, x, w],
            [x, T::zero(), z],
            [-w, z, -two * y],
        )
        .scale(two);
        let dr_dz = Mat3::from_rows(
            [-two * z, -w, x],
            [w, -two * z, y],
            [x, y, T::zero()],
        )
        .scale(two);
        let unit_grads = [dr_dw, dr_dx, dr_dy, dr_dz];
        // Chain through normalization: d(q_hat)/d(q_raw) = (I - q_hat q_hat^T) / n
        let qh = [w, x, y, z];
        let inv_n = T::one() / n;
        let mut out = [Mat3::default(); 4];
        for (raw, slot) in out.iter_mut().enumerate() {
            let mut acc = Mat3::default();
            for (unit, g) in unit_grads.iter().enumerate() {
                let delta = if raw == unit { T::one() } else { T::zero() };
                let coeff = (delta - qh[unit] * qh[raw]) * inv_n;
                acc = acc.add(&g.scale(coeff));
            }
            *slot = acc;
        }
        out
    }
}

/// Logistic sigmoid.
#[inline]
pub fn sigmoid<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

/// Inverse of `sigmoid` on (0, 1).
#[inline]
pub fn logit<T: Scalar>(p: T) -> T {
    (p / (T::one() - p)).ln()
}
