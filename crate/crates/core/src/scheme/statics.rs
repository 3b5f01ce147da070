use super::{PreStep, StaticScheme, Target};
use crate::codes::{Layout, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StaticKind {
    /// Z-BMs everywhere (tree codes: root in X first).
    Simple,
    /// Rotated surface: Z on the wave string, X elsewhere.
    Optimized,
    /// Standard surface: Z on a zigzag string across the longer side, X elsewhere.
    String,
}

/// Weight of the wave-shaped Z̄ string on the rotated `r × m` lattice.
pub fn wz_weight(r: usize, m: usize) -> usize {
    let f = |a: usize| a / 4;
    if r % 2 == 1 {
        1 + f(m + 2) + (r - 2) * f(m + 1) + f(m) + r * f(m - 1)
    } else {
        1 + f(m + 2) + (r - 1) * f(m + 1) + f(m) + (r - 1) * f(m - 1)
    }
}

/// Vertices `(row, column)` (1-based) of the wave string on the rotated lattice.
///
/// The string runs along the columns with period four: one vertex on the top
/// row, a run down the middle, one vertex on the bottom row, a full run up. An
/// even last column keeps a single vertex so that the string ends on the boundary.
pub fn wave_string(r: usize, m: usize) -> Vec<(usize, usize)> {
    let (mid, full) = if r % 2 == 1 { (r - 2, r) } else { (r - 1, r - 1) };
    let mut out = Vec::new();
    for c in 1..=m {
        if c == m && m % 2 == 0 {
            let row = if m % 4 == 2 { 1 } else if r % 2 == 1 { r } else { r - 1 };
            out.push((row, c));
            continue;
        }
        match c % 4 {
            1 => out.push((1, c)),
            2 => out.extend((2..2 + mid).map(|i| (i, c))),
            3 => out.push((r, c)),
            _ => out.extend((1..=full).map(|i| (i, c))),
        }
    }
    out
}

/// Zigzag through layers 1–3 with one qubit per column (Z-type, `m >= r`), or
/// through columns 1–3 with one qubit per layer (X-type, `r > m`).
pub fn standard_string(r: usize, m: usize) -> (Letter, Vec<(usize, usize)>) {
    let zig = |t: usize| match t % 4 {
        1 => 1,
        2 | 0 => 2,
        _ => 3,
    };
    if m >= r {
        (Letter::Z, (1..=2 * m - 1).map(|c| (zig(c), c)).collect())
    } else {
        (Letter::X, (1..=2 * r - 1).map(|l| (l, zig(l))).collect())
    }
}

fn on_string(coords: &[(usize, usize)], string: &[(usize, usize)], on: Letter, off: Letter) -> Vec<Letter> {
    coords.iter().map(|c| if string.contains(c) { on } else { off }).collect()
}

pub fn build_static(kind: StaticKind, code: &StabilizerCode) -> Result<StaticScheme> {
    let unsupported = || Error::Unsupported(format!("{kind:?} static scheme for {}", code.family()));
    match (kind, code.layout()) {
        (StaticKind::Simple, Layout::Tree(_)) => {
            let target = Target::new(code.clone(), vec![PreStep { site: 0, letter: Letter::X }])?;
            let n = target.n();
            StaticScheme::new(format!("{}-static", code.family()), target, vec![Letter::Z; n])
        }
        (StaticKind::Simple, _) => {
            StaticScheme::new(format!("{}-static-simple", code.family()), Target::plain(code.clone()), vec![Letter::Z; code.n()])
        }
        (StaticKind::Optimized, Layout::Grid { rows, cols, coords }) if code.family().starts_with("rotated") => {
            let bases = on_string(coords, &wave_string(*rows, *cols), Letter::Z, Letter::X);
            StaticScheme::new(format!("{}-static-optimized", code.family()), Target::plain(code.clone()), bases)
        }
        (StaticKind::String, Layout::Layered { r, m, coords }) => {
            let (letter, string) = standard_string(*r, *m);
            let other = if letter == Letter::Z { Letter::X } else { Letter::Z };
            let bases = on_string(coords, &string, letter, other);
            StaticScheme::new(format!("{}-static-string", code.family()), Target::plain(code.clone()), bases)
        }
        _ => Err(unsupported()),
    }
}
