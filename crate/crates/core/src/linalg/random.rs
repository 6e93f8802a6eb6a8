//! Seeded random states, unitaries and channels for generators and property tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, DensityMatrix, KrausChannel};

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `rows x cols` matrix with orthonormal columns (`rows >= cols`).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let q = ginibre(rows, cols, rng).qr().q();
    ComplexMatrix::from_nalgebra(&q)
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(dim, dim, rng)
}

/// Mixed state `G G† / Tr(G G†)` with `G` a `dim x rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rank.max(1), rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::from_trusted(ComplexMatrix::from_nalgebra(&rho.map(|z| z / tr)).hermitian_part())
}

/// Stinespring isometry `V: in -> out ⊗ env` cut into `n_kraus` blocks `K_e = (<e| ⊗ 1) V`.
pub fn random_channel<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    n_kraus: usize,
    rng: &mut R,
) -> KrausChannel {
    let n_kraus = n_kraus.max(in_dim.div_ceil(out_dim));
    let v = random_isometry(out_dim * n_kraus, in_dim, rng);
    let kraus = (0..n_kraus)
        .map(|e| {
            let mut k = ComplexMatrix::zeros(out_dim, in_dim);
            for o in 0..out_dim {
                for i in 0..in_dim {
                    k.set(o, i, v.get(e * out_dim + o, i));
                }
            }
            k
        })
        .collect();
    KrausChannel::new(in_dim, out_dim, kraus).expect("blocks have channel shape")
}
