//! Real spherical harmonics basis (degrees 0..=3) and view-dependent color
//! evaluation with the usual splatting conventions: `rgb = SH(dir) + 0.5`,
//! clamped to [0, 1].

use crate::math::Vec3;
use crate::scalar::{c, Scalar};

pub const SH_C0: f64 = 0.28209479177387814;
pub const SH_C1: f64 = 0.4886025119029199;
pub const SH_C2: [f64; 5] = [
    1.0925484305920792,
    -1.0925484305920792,
    0.31539156525252005,
    -1.0925484305920792,
    0.5462742152960396,
];
pub const SH_C3: [f64; 7] = [
    -0.5900435899266435,
    2.890611442640554,
    -0.4570457994644658,
    0.3731763325901154,
    -0.4570457994644658,
    1.445305721320277,
    -0.5900435899266435,
];

pub const fn coeffs_for_degree(degree: usize) -> usize {
    (degree + 1) * (degree + 1)
}

/// Evaluate the basis at a unit direction, writing up to 16 values.
pub fn eval_basis<T: Scalar>(degree: usize, dir: Vec3<T>, out: &mut [T; 16]) {
    let (x, y, z) = (dir.x, dir.y, dir.z);
    out[0] = c(SH_C0);
    if degree < 1 {
        return;
    }
    let c1 = c::<T>(SH_C1);
    out[1] = -c1 * y;
    out[2] = c1 * z;
    out[3] = -c1 * x;
    if degree < 2 {
        return;
    }
    let (xx, yy, zz) = (x * x, y * y, z * z);
    let (xy, yz, xz) = (x * y, y * z, x * z);
    out[4] = c::<T>(SH_C2[0]) * xy;
    out[5] = c::<T>(SH_C2[1]) * yz;
    out[6] = c::<T>(SH_C2[2]) * (c::<T>(2.0) * zz - xx - yy);
    out[7] = c::<T>(SH_C2[3]) * xz;
    out[8] = c::<T>(SH_C2[4]) * (xx - yy);
    if degree < 3 {
        return;
    }
    let three = c::<T>(3.0);
    let four = c::<T>(4.0);
    out[9] = c::<T>(SH_C3[0]) * y * (three * xx - yy);
    out[10] = c::<T>(SH_C3[1]) * xy * z;
    out[11] = c::<T>(SH_C3[2]) * y * (four * zz - xx - yy);
    out[12] = c::<T>(SH_C3[3]) * z * (c::<T>(2.0) * zz - three * xx - three * yy);
    out[13] = c::<T>(SH_C3[4]) * x * (four * zz - xx - yy);
    out[14] = c::<T>(SH_C3[5]) * z * (xx - yy);
    out[15] = c::<T>(SH_C3[6]) * x * (xx - three * yy);
}

/// Basis plus its partial derivatives with respect to the direction.
pub fn eval_basis_grad<T: Scalar>(
    degree: usize,
    dir: Vec3<T>,
    basis: &mut [T; 16],
    grad: &mut [[T; 3]; 16],
) {
    eval_basis(degree, dir, basis);
    for g in grad.iter_mut() {
        *g = [T::zero(); 3];
    }
    if degree < 1 {
        return;
    }
    let (x, y, z) = (dir.x, dir.y, dir.z);
    let c1 = c::<T>(SH_C1);
    grad[1] = [T::zero(), -c1, T::zero()];
    grad[2] = [T::zero(), T::zero(), c1];
    grad[3] = [-c1, T::zero(), T::zero()];
    if degree < 2 {
        return;
    }
    let two = c::<T>(2.0);
    let (xx, yy, zz) = (x * x, y * y, z * z);
    grad[4] = [c::<T>(SH_C2[0]) * y, c::<T>(SH_C2[0]) * x, T::zero()];
    grad[5] = [T::zero(), c::<T>(SH_C2[1]) * z, c::<T>(SH_C2[1]) * y];
    grad[6] = [
        -two * x * c::<T>(SH_C2[2]),
        -two * y * c::<T>(SH_C2[2]),
        c::<T>(4.0) * z * c::<T>(SH_C2[2]),
    ];
    grad[7] = [c::<T>(SH_C2[3]) * z, T::zero(), c::<T>(SH_C2[3]) * x];
    grad[8] = [two * x * c::<T>(SH_C2[4]), -two * y * c::<T>(SH_C2[4]), T::zero()];
    if degree < 3 {
        return;
    }
    let three = c::<T>(3.0);
    let four = c::<T>(4.0);
    let six = c::<T>(6.0);
    let eight = c::<T>(8.0);
    grad[9] = [
        c::<T>(SH_C3[0]) * six * x * y,
        c::<T>(SH_C3[0]) * (three * xx - three * yy),
        T::zero(),
    ];
    grad[10] = [
        c::<T>(SH_C3[1]) * y * z,
        c::<T>(SH_C3[1]) * x * z,
        c::<T>(SH_C3[1]) * x * y,
    ];
    grad[11] = [
        -two * x * y * c::<T>(SH_C3[2]),
        c::<T>(SH_C3[2]) * (four * zz - xx - three * yy),
        eight * y * z * c::<T>(SH_C3[2]),
    ];
    grad[12] = [
        -six * x * z * c::<T>(SH_C3[3]),
        -six * y * z * c::<T>(SH_C3[3]),
        c::<T>(SH_C3[3]) * (six * zz - three * xx - three * yy),
    ];
    grad[13] = [
        c::<T>(SH_C3[4]) * (four * zz - three * xx - yy),
        -two * x * y * c::<T>(SH_C3[4]),
        eight * x * z * c::<T>(SH_C3[4]),
    ];
    grad[14] = [
        two * x * z * c::<T>(SH_C3[5]),
        -two * y * z * c::<T>(SH_C3[5]),
        c::<T>(SH_C3[5]) * (xx - yy),
    ];
    grad[15] = [
        c::<T>(SH_C3[6]) * (three * xx - three * yy),
        -six * x * y * c::<T>(SH_C3[6]),
        T::zero(),
    ];
}

/// View-dependent RGB from SH coefficients (`sh[k*3 + channel]`), clamped to [0,1].
pub fn sh_to_rgb<T: Scalar>(sh: &[T], view_dir: Vec3<T>) -> [T; 3] {
    let n_coeffs = sh.len() / 3;
    let degree = match n_coeffs {
        1 => 0,
        4 => 1,
        9 => 2,
        _ => 3,
    };
    let mut basis = [T::zero(); 16];
    eval_basis(degree, view_dir, &mut basis);
    let mut rgb = [T::zero(); 3];
    for (ch, out) in rgb.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (k, b) in basis.iter().enumerate().take(n_coeffs) {
            acc = acc + *b * sh[k * 3 + ch];
        }
        *out = (acc + c(0.5)).max(T::zero()).min(T::one());
    }
    rgb
}
