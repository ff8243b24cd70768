use ib_model::HypothesisFamily;
use ib_numkit::{orthonormalize, RealMatrix, RealVector};

/// Re-express a family on `Z' = span(H)`. Directions of `Z` no hypothesis
/// uses only inflate `D_Z`; the quotient by `Z ∩ 𝒩` does not remove them
/// when they act on outcomes. Returns the new family and the orthonormal
/// basis (columns) of `Z'` inside `Z`.
pub fn restrict_to_span(fam: &HypothesisFamily) -> (HypothesisFamily, RealMatrix) {
    let cols: Vec<RealVector> = fam
        .hypotheses
        .iter()
        .map(|h| RealVector::from_column_slice(h))
        .collect();
    let q = orthonormalize(&cols, fam.dim_z);
    let k = q.ncols();
    let hypotheses = fam
        .hypotheses
        .iter()
        .map(|h| {
            (0..k)
                .map(|c| (0..fam.dim_z).map(|i| q[(i, c)] * h[i]).sum())
                .collect()
        })
        .collect();
    let tensors = fam
        .tensors
        .iter()
        .map(|t| {
            t.iter()
                .map(|tw| {
                    (0..k)
                        .map(|c| {
                            let dy = tw.first().map_or(0, |r| r.len());
                            (0..dy)
                                .map(|j| (0..fam.dim_z).map(|i| q[(i, c)] * tw[i][j]).sum())
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let out = HypothesisFamily {
        arms: fam.arms.clone(),
        dim_z: k,
        dim_w: fam.dim_w,
        hypotheses,
        tensors,
    };
    (out, q)
}
