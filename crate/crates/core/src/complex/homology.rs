use super::{BettiVector, ComplexError, SimplicialComplex};

/// Mod-2 Betti numbers `β_0, …, β_max_dim`.
///
/// `β_i = |C_i| − rank ∂_i − rank ∂_{i+1}`, so the complex must store
/// simplices up to dimension `max_dim + 1`.
pub fn betti(complex: &SimplicialComplex, max_dim: usize) -> Result<BettiVector, ComplexError> {
    if max_dim + 1 > complex.dim_cap() {
        return Err(ComplexError::InsufficientDimCap {
            requested: max_dim,
            needed: max_dim + 1,
            cap: complex.dim_cap(),
        });
    }
    let ranks: Vec<usize> = (0..=max_dim + 1)
        .map(|d| if d == 0 { 0 } else { boundary_rank(complex, d) })
        .collect();
    Ok(BettiVector(
        (0..=max_dim).map(|i| complex.count(i) - ranks[i] - ranks[i + 1]).collect(),
    ))
}

/// `Σ (−1)^d |C_d|` over the stored simplices.
pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    (0..=complex.dim_cap())
        .map(|d| if d % 2 == 0 { complex.count(d) as i64 } else { -(complex.count(d) as i64) })
        .sum()
}

// Rank of ∂_d : C_d → C_{d−1} by column reduction with sparse sorted columns.
fn boundary_rank(complex: &SimplicialComplex, d: usize) -> usize {
    let faces = complex.simplices(d - 1);
    let mut owner: Vec<Option<usize>> = vec![None; faces.len()];
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut face = Vec::with_capacity(d);
    for s in complex.simplices(d) {
        let mut col: Vec<u32> = (0..s.len())
            .map(|skip| {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                faces
                    .binary_search_by(|f| f.as_slice().cmp(&face))
                    .expect("complex is downward closed") as u32
            })
            .collect();
        col.sort_unstable();
        while let Some(&pivot) = col.last() {
            match owner[pivot as usize] {
                Some(j) => col = symmetric_difference(&col, &reduced[j]),
                None => {
                    owner[pivot as usize] = Some(reduced.len());
                    reduced.push(col);
                    break;
                }
            }
        }
    }
    reduced.len()
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
