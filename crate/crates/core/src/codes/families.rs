use super::{Layout, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, Pauli};

/// Quantum parity code: `r` rows of `m` qubits, row-major.
pub fn qpc(r: usize, m: usize) -> Result<StabilizerCode> {
    if r == 0 || m == 0 {
        return Err(Error::InvalidParams(format!("qpc({r},{m}) needs positive dimensions")));
    }
    let n = r * m;
    let idx = |i: usize, j: usize| i * m + j;
    let mut gens = Vec::with_capacity(n - 1);
    for i in 0..r {
        for j in 0..m - 1 {
            gens.push(Pauli::on_sites(n, [idx(i, j), idx(i, j + 1)], Letter::Z));
        }
    }
    for i in 0..r - 1 {
        gens.push(Pauli::on_sites(n, (0..m).flat_map(|t| [idx(i, t), idx(i + 1, t)]), Letter::X));
    }
    let lx = Pauli::on_sites(n, (0..m).map(|t| idx(0, t)), Letter::X);
    let lz = Pauli::on_sites(n, (0..r).map(|i| idx(i, 0)), Letter::Z);
    let coords = (0..n).map(|q| (q / m + 1, q % m + 1)).collect();
    Ok(StabilizerCode::new(format!("qpc({r},{m})"), gens, lx, lz)?.with_layout(Layout::Grid { rows: r, cols: m, coords }))
}

pub fn five_qubit() -> StabilizerCode {
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| s.parse().unwrap()).collect();
    StabilizerCode::new("five-qubit", gens, "XXXXX".parse().unwrap(), "ZZZZZ".parse().unwrap()).expect("five-qubit code")
}

/// Faces of the seven-qubit triangle (1-based sites): red, green, blue.
pub const STEANE_FACES: [[usize; 4]; 3] = [[1, 2, 3, 4], [2, 4, 5, 6], [3, 4, 6, 7]];

pub fn steane() -> StabilizerCode {
    let mut gens = Vec::with_capacity(6);
    for letter in [Letter::X, Letter::Z] {
        for f in STEANE_FACES {
            gens.push(Pauli::on_sites(7, f.iter().map(|v| v - 1), letter));
        }
    }
    let chain = [0, 2, 6];
    StabilizerCode::new("steane", gens, Pauli::on_sites(7, chain, Letter::X), Pauli::on_sites(7, chain, Letter::Z))
        .expect("steane code")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::CosetClass;
    use crate::gf2::{rank_of, SymplecticBasis};

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn qpc22_generators() {
        let c = qpc(2, 2).unwrap();
        let mut g: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
        g.sort();
        assert_eq!(g, vec!["+IIZZ", "+XXXX", "+ZZII"]);
        assert_eq!(c.logical_x(), &p("XXII"));
        assert_eq!(c.logical_z(), &p("ZIZI"));
    }

    #[test]
    fn qpc_degenerate_and_large() {
        let c = qpc(1, 1).unwrap();
        assert!(c.generators().is_empty());
        assert_eq!(c.logical_x(), &p("X"));
        assert_eq!(c.logical_z(), &p("Z"));
        let big = qpc(5, 5).unwrap();
        assert_eq!(big.n(), 25);
        assert_eq!(rank_of(big.generators()), 24);
        assert!(qpc(0, 3).is_err());
    }

    #[test]
    fn five_qubit_logical_reps_from_the_sequences() {
        let c = five_qubit();
        for s in ["XIYYI", "IXIYY", "YIXIY", "YYIXI", "IYYIX"] {
            assert_eq!(c.coset_class(&p(s)), CosetClass::LogicalX, "{s}");
        }
        for s in ["ZYIIY", "YZYII", "IYZYI", "IIYZY", "YIIYZ"] {
            assert_eq!(c.coset_class(&p(s)), CosetClass::LogicalZ, "{s}");
        }
    }

    #[test]
    fn steane_structure() {
        let c = steane();
        let b = SymplecticBasis::from_ops(7, c.generators()).unwrap();
        for s in ["ZZZZIII", "IXIXXXI", "IIXXIXX", "XIIXXIX", "IZIZZZI", "IIZZIZZ"] {
            assert!(b.contains(&p(s)), "{s}");
        }
        assert_eq!(c.coset_class(&p("XXXXXXX")), CosetClass::LogicalX);
        assert_eq!(c.coset_class(&p("ZZZZZZZ")), CosetClass::LogicalZ);
        assert_eq!(c.coset_class(&p("IZIZXXY")), CosetClass::LogicalY);
        assert_eq!(c.coset_class(&p("XIIIIII")), CosetClass::Outside);
    }
}
