//! sRGB, CIE XYZ (D65) and CIEL*a*b* conversions, plus the two closed-form
//! grayscale baselines.
//!
//! The RGB to XYZ matrix is derived from the sRGB primaries and the D65 white
//! `(0.95047, 1.0, 1.08883)`, so `(1, 1, 1)` lands exactly on the reference
//! white and has zero chroma.

use rayon::prelude::*;

use crate::image::{GrayImage, LabImage, RgbImage};

/// D65 reference white, `Y` normalized to 1.
pub const WHITE_D65: [f64; 3] = [0.95047, 1.0, 1.08883];

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.41245643908969226, 0.3575760776439089, 0.1804374832663989],
    [0.21267285140562256, 0.7151521552878178, 0.07217499330655956],
    [
        0.019333895582329303,
        0.11919202588130294,
        0.9503040785363677,
    ],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.2404541621141045, -1.537138512797716, -0.498531409556016],
    [-0.969266030505187, 1.8760108454466944, 0.04155601753034985],
    [
        0.05564343095911473,
        -0.20402591351675384,
        1.0572251882231791,
    ],
];

// CIE constants in their exact rational form.
const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

/// NTSC luma weights for (r, g, b).
pub const NTSC_WEIGHTS: [f64; 3] = [0.3, 0.6, 0.1];

/// sRGB electro-optical transfer function (encoded to linear light).
#[inline]
pub fn srgb_to_linear(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// Inverse of [`srgb_to_linear`].
#[inline]
pub fn linear_to_srgb(v: f64) -> f64 {
    if v <= 0.0031308 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

#[inline]
fn mat_mul(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[inline]
fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

#[inline]
fn lab_f_inv(f: f64) -> f64 {
    let cube = f * f * f;
    if cube > EPSILON {
        cube
    } else {
        (116.0 * f - 16.0) / KAPPA
    }
}

/// Converts one sRGB-encoded pixel to CIE XYZ (D65).
#[inline]
pub fn rgb_to_xyz(rgb: [f64; 3]) -> [f64; 3] {
    mat_mul(&RGB_TO_XYZ, rgb.map(srgb_to_linear))
}

#[inline]
pub fn xyz_to_lab(xyz: [f64; 3]) -> [f64; 3] {
    let fx = lab_f(xyz[0] / WHITE_D65[0]);
    let fy = lab_f(xyz[1] / WHITE_D65[1]);
    let fz = lab_f(xyz[2] / WHITE_D65[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

#[inline]
pub fn lab_to_xyz(lab: [f64; 3]) -> [f64; 3] {
    let [l, a, b] = lab;
    let fy = (l + 16.0) / 116.0;
    let fx = fy + a / 500.0;
    let fz = fy - b / 200.0;
    // The lightness branch avoids the cube for very dark values.
    let yr = if l > KAPPA * EPSILON {
        fy * fy * fy
    } else {
        l / KAPPA
    };
    [
        lab_f_inv(fx) * WHITE_D65[0],
        yr * WHITE_D65[1],
        lab_f_inv(fz) * WHITE_D65[2],
    ]
}

/// Converts one sRGB-encoded pixel to L*a*b*.
#[inline]
pub fn rgb_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    xyz_to_lab(rgb_to_xyz(rgb))
}

/// Converts one L*a*b* pixel to sRGB, clamping out-of-gamut channels.
#[inline]
pub fn lab_to_rgb(lab: [f64; 3]) -> [f64; 3] {
    let linear = mat_mul(&XYZ_TO_RGB, lab_to_xyz(lab));
    linear.map(|c| linear_to_srgb(c.clamp(0.0, 1.0)).clamp(0.0, 1.0))
}

pub fn srgb_to_lab(img: &RgbImage) -> LabImage {
    let n = img.pixels().len();
    let mut l = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let lab: Vec<[f64; 3]> = img.pixels().par_iter().map(|&p| rgb_to_lab(p)).collect();
    for [pl, pa, pb] in lab {
        l.push(pl);
        a.push(pa);
        b.push(pb);
    }
    LabImage {
        width: img.width(),
        height: img.height(),
        l,
        a,
        b,
    }
}

pub fn lab_to_srgb(lab: &LabImage) -> RgbImage {
    let data = (0..lab.l.len())
        .into_par_iter()
        .map(|i| lab_to_rgb([lab.l[i], lab.a[i], lab.b[i]]))
        .collect();
    RgbImage::from_clamped(lab.width, lab.height, data)
}

/// The `0.3 r + 0.6 g + 0.1 b` rule applied to the encoded channels.
pub fn ntsc_gray(img: &RgbImage) -> GrayImage {
    let [wr, wg, wb] = NTSC_WEIGHTS;
    let data = img
        .pixels()
        .iter()
        .map(|p| wr * p[0] + wg * p[1] + wb * p[2])
        .collect();
    GrayImage::new(img.width(), img.height(), data).expect("dimensions come from a valid image")
}

/// Relative luminance `Y` of each pixel (linear light, white = 1).
pub fn cie_y_gray(img: &RgbImage) -> GrayImage {
    let data = img
        .pixels()
        .iter()
        .map(|&p| rgb_to_xyz(p)[1] / WHITE_D65[1])
        .collect();
    GrayImage::new(img.width(), img.height(), data).expect("dimensions come from a valid image")
}
