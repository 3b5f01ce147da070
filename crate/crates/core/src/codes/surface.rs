use super::{Layout, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, Pauli};

fn check_dims(r: usize, m: usize) -> Result<()> {
    if r < 2 || m < 2 {
        return Err(Error::InvalidParams(format!("surface code needs r, m >= 2, got ({r},{m})")));
    }
    Ok(())
}

/// Standard planar surface code on the `(2r-1) × (2m-1)` layer/column grid.
///
/// Qubits sit at even `l + c`, numbered lexicographically. Vertex operators
/// (odd `l`, even `c`) are X-type, face operators (even `l`, odd `c`) Z-type.
pub fn standard_surface(r: usize, m: usize) -> Result<StabilizerCode> {
    check_dims(r, m)?;
    let (lmax, cmax) = (2 * r - 1, 2 * m - 1);
    let mut coords = Vec::new();
    let mut index = vec![vec![usize::MAX; cmax + 2]; lmax + 2];
    for l in 1..=lmax {
        for c in 1..=cmax {
            if (l + c) % 2 == 0 {
                index[l][c] = coords.len();
                coords.push((l, c));
            }
        }
    }
    let n = coords.len();
    let around = |l: usize, c: usize| -> Vec<usize> {
        let mut v = Vec::with_capacity(4);
        for (dl, dc) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            let (a, b) = (l as i64 + dl, c as i64 + dc);
            if a >= 1 && b >= 1 && a as usize <= lmax && b as usize <= cmax {
                v.push(index[a as usize][b as usize]);
            }
        }
        v
    };
    let mut gens = Vec::with_capacity(n - 1);
    for l in (1..=lmax).step_by(2) {
        for c in (2..=cmax).step_by(2) {
            gens.push(Pauli::on_sites(n, around(l, c), Letter::X));
        }
    }
    for l in (2..=lmax).step_by(2) {
        for c in (1..=cmax).step_by(2) {
            gens.push(Pauli::on_sites(n, around(l, c), Letter::Z));
        }
    }
    let lx = Pauli::on_sites(n, (1..=lmax).step_by(2).map(|l| index[l][1]), Letter::X);
    let lz = Pauli::on_sites(n, (1..=cmax).step_by(2).map(|c| index[1][c]), Letter::Z);
    Ok(StabilizerCode::new(format!("standard({r},{m})"), gens, lx, lz)?.with_layout(Layout::Layered { r, m, coords }))
}

/// Plaquette supports of the rotated code (0-based site indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotatedPlaquettes {
    pub x: Vec<Vec<usize>>,
    pub z: Vec<Vec<usize>>,
}

impl RotatedPlaquettes {
    /// Face `(i, j)` spans vertices `(i..=i+1, j..=j+1)` and is X-type iff `i + j`
    /// is even; weight-two boundary faces keep the checkerboard alternation.
    pub fn new(r: usize, m: usize) -> RotatedPlaquettes {
        let idx = |i: usize, j: usize| (i - 1) * m + (j - 1);
        let (mut x, mut z) = (Vec::new(), Vec::new());
        for i in 1..r {
            for j in 1..m {
                let s = vec![idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1)];
                if (i + j) % 2 == 0 {
                    x.push(s);
                } else {
                    z.push(s);
                }
            }
        }
        for i in 1..r {
            if i % 2 == 1 {
                z.push(vec![idx(i, 1), idx(i + 1, 1)]);
            }
            if (i + m - 1) % 2 == 0 {
                z.push(vec![idx(i, m), idx(i + 1, m)]);
            }
        }
        for j in 1..m {
            if j % 2 == 0 {
                x.push(vec![idx(1, j), idx(1, j + 1)]);
            }
            if (r - 1 + j) % 2 == 1 {
                x.push(vec![idx(r, j), idx(r, j + 1)]);
            }
        }
        RotatedPlaquettes { x, z }
    }
}

/// Rotated planar surface code on an `r × m` vertex grid, row-major.
pub fn rotated_surface(r: usize, m: usize) -> Result<StabilizerCode> {
    check_dims(r, m)?;
    let n = r * m;
    let pl = RotatedPlaquettes::new(r, m);
    let mut gens: Vec<Pauli> = pl.x.iter().map(|s| Pauli::on_sites(n, s.iter().copied(), Letter::X)).collect();
    gens.extend(pl.z.iter().map(|s| Pauli::on_sites(n, s.iter().copied(), Letter::Z)));
    let lx = Pauli::on_sites(n, (0..r).map(|i| i * m), Letter::X);
    let lz = Pauli::on_sites(n, 0..m, Letter::Z);
    let coords = (0..n).map(|q| (q / m + 1, q % m + 1)).collect();
    Ok(StabilizerCode::new(format!("rotated({r},{m})"), gens, lx, lz)?.with_layout(Layout::Grid { rows: r, cols: m, coords }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_counts() {
        for r in 2..=6 {
            for m in 2..=6 {
                assert_eq!(standard_surface(r, m).unwrap().n(), 2 * m * r - m - r + 1);
                assert_eq!(rotated_surface(r, m).unwrap().n(), r * m);
            }
        }
        assert_eq!(standard_surface(4, 4).unwrap().n(), 25);
        assert_eq!(standard_surface(2, 2).unwrap().n(), 5);
        assert!(rotated_surface(1, 4).is_err());
    }

    #[test]
    fn first_site_sees_only_the_left_boundary_z_plaquette() {
        let c = rotated_surface(5, 5).unwrap();
        let x1 = Pauli::single(25, 0, Letter::X);
        let anti: Vec<_> = c.generators().iter().filter(|g| !g.commutes(&x1).unwrap()).collect();
        assert_eq!(anti.len(), 1);
        assert_eq!(anti[0].support(), vec![0, 5]);
    }

    #[test]
    fn rotated_plaquette_count() {
        let p = RotatedPlaquettes::new(5, 5);
        assert_eq!(p.x.len() + p.z.len(), 24);
        assert_eq!(p.x.len(), 12);
    }
}
