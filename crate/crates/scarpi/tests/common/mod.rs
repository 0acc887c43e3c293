//! Reference values shared by the integration tests.
//!
//! The tabulated values were computed with mpmath at 40 significant
//! digits and rounded.

#![allow(dead_code, clippy::excessive_precision)]

use scarpi::transition::TransitionSpec;

/// `E_{1/2}(z) = e^{z²}·erfc(-z)`, usable while `e^{z²}` stays finite.
pub fn ml_half(z: f64) -> f64 {
    (z * z).exp() * libm::erfc(-z)
}

/// `(β, z, E_β(z))`.
pub const ML_VALUES: &[(f64, f64, f64)] = &[
    (0.5, -1.0, 0.42758357615580700441),
    (0.5, -2.0, 0.25539567631050574387),
    (0.5, -10.0, 0.056140992743822585858),
    (0.3, -0.5, 0.63264900594359902246),
    (0.3, -5.0, 0.13708086902027063889),
    (0.3, -50.0, 0.015228201501814695234),
    (0.3, -1e4, 7.7033810249795533348e-5),
    (0.6, -1.0, 0.41332734094310630052),
    (0.6, -10.0, 0.046589654426804280962),
    (0.6, -100.0, 0.0045252427131328117995),
    (0.6, -1e4, 4.508413761918204664e-5),
    (0.9, -3.0, 0.083888354033773262067),
    (0.9, -30.0, 0.003713707698459852111),
    (0.9, -1e4, 1.0513113058088607289e-5),
    (0.99, -10.0, 0.0013478638060832084404),
    (1.01, -10.0, -0.0012614124214919400792),
    (1.5, -2.0, 0.029430685602826471728),
    (1.5, -30.0, -0.014470224834105874553),
    (1.8, -50.0, -0.17643515585736695824),
    (0.7, 2.0, 20.966433131481956304),
    (1.3, 4.0, 14.087897895149225487),
    (0.4, -7.0, 0.091092933797735360073),
    (1.2, -15.0, -0.013455707401708763267),
];

pub fn exponential() -> TransitionSpec {
    TransitionSpec::exponential(0.6, 0.8, 2.0)
}

pub fn mittag_leffler_kind() -> TransitionSpec {
    TransitionSpec::mittag_leffler(0.6, 0.8, 2.0, 0.7)
}

/// `(λ, [u(0.1), u(1), u(5)])` for `u₀ = 1`.
pub const EXPONENTIAL_SOLUTION: &[(f64, [f64; 3])] = &[
    (
        0.5,
        [
            0.880848774624719837,
            0.622461791262386174,
            0.218776033384830793,
        ],
    ),
    (
        1.0,
        [
            0.781992297569393653,
            0.42120130032693772,
            0.0853028121578277676,
        ],
    ),
    (
        2.0,
        [
            0.629561009625534551,
            0.231141216646367715,
            0.0325619454574079226,
        ],
    ),
];

pub const ML_KIND_SOLUTION: &[(f64, [f64; 3])] = &[
    (
        0.5,
        [
            0.888134314747732145,
            0.615703518558107476,
            0.229377406679998995,
        ],
    ),
    (
        1.0,
        [
            0.794175926802256016,
            0.411367632582772269,
            0.0938835029729596717,
        ],
    ),
    (
        2.0,
        [
            0.646944718061263954,
            0.22094373281517855,
            0.0368872735189345751,
        ],
    ),
];

pub const SOLUTION_TIMES: [f64; 3] = [0.1, 1.0, 5.0];

/// `u(10⁻⁴)` and `u(50)` at `λ = 1`.
pub const EXPONENTIAL_ENDPOINTS: (f64, f64) = (0.995559935329890598, 0.00993950809145447024);
pub const ML_KIND_ENDPOINTS: (f64, f64) = (0.995579861766277376, 0.00975973321334698414);

/// `(t, φ(t), ψ(t))`.
pub const EXPONENTIAL_KERNELS: &[(f64, f64, f64)] = &[
    (0.5, 0.701927082798051528, 0.818530042612359591),
    (1.0, 0.283440634846912417, 0.750773246361868916),
];
pub const ML_KIND_KERNELS: &[(f64, f64, f64)] = &[
    (0.5, 0.593828796479698817, 0.876721155363696777),
    (1.0, 0.281284808886117124, 0.770305785655133791),
];

/// `L⁻¹[Φ/s](1)` and `L⁻¹[Ψ/s](1)`.
pub const EXPONENTIAL_KERNEL_INTEGRALS: (f64, f64) = (1.18605376237484358, 1.04598358756426277);
pub const ML_KIND_KERNEL_INTEGRALS: (f64, f64) = (1.15442312777216234, 1.06306339334611212);

pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
