//! Small reference tensors with known spectra, used by tests, the CLI golden
//! files and the benchmark harness. All are `2 × 2 × 2 × 2`.

use crate::tensor::BiquadraticTensor;

fn build(coords: &[(usize, usize, usize, usize, f64)]) -> BiquadraticTensor {
    BiquadraticTensor::from_coo(2, 2, coords).expect("catalog tensor is well formed")
}

/// Irreducible symmetric tensor with three M⁺-eigenpairs (10.9075 twice,
/// 10.5) and eight M-eigenvalues in total.
pub fn multiple_mplus() -> BiquadraticTensor {
    build(&[
        (0, 0, 0, 0, 4.0),
        (0, 1, 0, 1, 10.0),
        (1, 0, 1, 0, 10.0),
        (1, 1, 1, 1, 2.0),
        (0, 0, 0, 1, 1.0),
        (0, 0, 1, 0, 1.0),
        (0, 1, 0, 0, 1.0),
        (1, 0, 0, 0, 1.0),
        (0, 0, 1, 1, 1.0),
        (0, 1, 1, 0, 1.0),
        (1, 0, 0, 1, 1.0),
        (1, 1, 0, 0, 1.0),
        (0, 1, 1, 1, 2.0),
        (1, 1, 0, 1, 2.0),
        (1, 0, 1, 1, 2.0),
        (1, 1, 1, 0, 2.0),
    ])
}

/// Reducible symmetric tensor whose spectrum mixes M⁺ and non-M⁺ values:
/// {4.6312, 2.3970, 1.7917, 1.0000, −0.1142, −1.9038}.
pub fn mixed_spectrum() -> BiquadraticTensor {
    build(&[
        (0, 0, 0, 0, 1.0),
        (0, 1, 0, 1, 1.0),
        (0, 0, 1, 1, 2.0),
        (0, 1, 1, 0, 2.0),
        (1, 0, 0, 1, 2.0),
        (1, 1, 0, 0, 2.0),
        (0, 0, 1, 0, 2.0),
        (1, 0, 0, 0, 2.0),
        (1, 0, 1, 0, 2.0),
        (1, 1, 1, 1, 1.0),
    ])
}

/// Only `a[0,0,0,0] = 1`: eigenvalues {1, 0} and no strictly positive pair.
pub fn single_corner() -> BiquadraticTensor {
    build(&[(0, 0, 0, 0, 1.0)])
}

/// Cross-coupled tensor with four entries equal to ½. Reducible on both
/// sides; the ratio bounds collapse to ½ while 0 is also an M⁺-eigenvalue.
pub fn cross_coupled() -> BiquadraticTensor {
    build(&[
        (0, 0, 1, 1, 0.5),
        (0, 1, 1, 0, 0.5),
        (1, 0, 0, 1, 0.5),
        (1, 1, 0, 0, 0.5),
    ])
}

/// Diagonal tensor with `a[i,j,i,j] = values[i][j]`.
pub fn diagonal(values: [[f64; 2]; 2]) -> BiquadraticTensor {
    build(&[
        (0, 0, 0, 0, values[0][0]),
        (0, 1, 0, 1, values[0][1]),
        (1, 0, 1, 0, values[1][0]),
        (1, 1, 1, 1, values[1][1]),
    ])
}
