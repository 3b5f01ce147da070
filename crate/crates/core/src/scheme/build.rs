use super::{CandidateGeneratorSequence, PreStep, Scheme, Target};
use crate::codes::{self, Layout, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, Pauli};

/// Code families with a built-in optimal scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Qpc(usize, usize),
    FiveQubit,
    Steane,
    Standard(usize, usize),
    Rotated(usize, usize),
    Tree(Vec<usize>),
}

impl Family {
    pub fn code(&self) -> Result<StabilizerCode> {
        match self {
            Family::Qpc(r, m) => codes::qpc(*r, *m),
            Family::FiveQubit => Ok(codes::five_qubit()),
            Family::Steane => Ok(codes::steane()),
            Family::Standard(r, m) => codes::standard_surface(*r, *m),
            Family::Rotated(r, m) => codes::rotated_surface(*r, *m),
            Family::Tree(b) => codes::tree(b),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Family::Qpc(r, m) => format!("qpc({r},{m})"),
            Family::FiveQubit => "five-qubit".into(),
            Family::Steane => "steane".into(),
            Family::Standard(r, m) => format!("standard({r},{m})"),
            Family::Rotated(r, m) => format!("rotated({r},{m})"),
            Family::Tree(b) => format!("tree({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

fn ops(lits: &[&str]) -> Vec<Pauli> {
    lits.iter().map(|s| s.parse().expect("literal")).collect()
}

/// Candidate sequence by the generator sweep: at each position the first
/// remaining generator anticommuting with `b_j` becomes `c_j`, the other
/// anticommuting ones are multiplied by it. When nothing anticommutes the
/// first remaining generator is taken as is (condition 1 then fails there).
pub fn sweep_candidates(code: &StabilizerCode, order: &[usize], bases: &[Letter]) -> CandidateGeneratorSequence {
    let n = code.n();
    let mut current: Vec<Pauli> = code.generators().to_vec();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n.saturating_sub(1) {
        let b = Pauli::single(n, order[j], bases[j]);
        let k = current.iter().position(|g| !g.commutes_unchecked(&b)).unwrap_or(0);
        let c = current.remove(k);
        for g in current.iter_mut() {
            if !g.commutes_unchecked(&b) {
                g.mul_assign_unchecked(&c);
            }
        }
        out.push(c.with_sign(1));
    }
    CandidateGeneratorSequence::unchecked(out)
}

/// Solutions `a` of `Σ a_i rows_i = rhs` over GF(2), as a particular solution and a null-space basis.
fn solve_affine(eqs: &[(u64, bool)], nvars: usize) -> Option<(u64, Vec<u64>)> {
    let mut rows: Vec<(u64, bool)> = eqs.iter().copied().filter(|(m, r)| *m != 0 || *r).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for v in 0..nvars {
        let bit = 1u64 << v;
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0 & bit != 0) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].0 & bit != 0 {
                rows[i].0 ^= rows[r].0;
                rows[i].1 ^= rows[r].1;
            }
        }
        pivots.push(v);
        r += 1;
    }
    if rows[r..].iter().any(|&(m, rhs)| m == 0 && rhs) {
        return None;
    }
    let mut particular = 0u64;
    for (i, &v) in pivots.iter().enumerate() {
        if rows[i].1 {
            particular |= 1 << v;
        }
    }
    let mut null = Vec::new();
    for f in (0..nvars).filter(|v| !pivots.contains(v)) {
        let mut sol = 1u64 << f;
        for (i, &v) in pivots.iter().enumerate() {
            if rows[i].0 & (1 << f) != 0 {
                sol |= 1 << v;
            }
        }
        null.push(sol);
    }
    Some((particular, null))
}

fn site_mask(p: &Pauli, letter: Letter) -> u64 {
    p.support().iter().filter(|&&s| p.letter(s) == letter).fold(0, |m, &s| m | 1 << s)
}

/// Combinations `base ⊕ Σ a_i gens_i` that vanish outside `allowed` and contain `must`.
fn affine_choices(gens: &[u64], base: u64, allowed: u64, must: usize, n: usize) -> Option<(u64, Vec<u64>)> {
    let mut eqs = Vec::new();
    for q in 0..n {
        let coeffs = gens.iter().enumerate().fold(0u64, |m, (i, g)| if g >> q & 1 == 1 { m | 1 << i } else { m });
        let b = base >> q & 1 == 1;
        if q == must {
            eqs.push((coeffs, !b));
        } else if allowed >> q & 1 == 0 {
            eqs.push((coeffs, b));
        }
    }
    let (p, null) = solve_affine(&eqs, gens.len())?;
    let combine = |a: u64| gens.iter().enumerate().fold(base, |v, (i, g)| if a >> i & 1 == 1 { v ^ g } else { v });
    Some((combine(p), null.iter().map(|&a| combine(a) ^ base).collect()))
}

/// Logical pair for position `j` of a CSS code: an X-type `X̄` on the sites
/// measured in X, site `order[j]` and unmeasured sites, and a Z-type `Z̄` on
/// the sites measured in Z, site `order[j]` and the unmeasured sites `X̄`
/// leaves free. Among valid choices the `X̄` touching the fewest unmeasured
/// sites wins, ties broken by the smallest site mask.
pub fn css_logical_pair(code: &StabilizerCode, order: &[usize], bases: &[Letter], j: usize) -> Result<(Pauli, Pauli)> {
    let n = code.n();
    if n > 64 {
        return Err(Error::Unsupported("logical-pair solver is limited to 64 qubits".into()));
    }
    let mut hx = Vec::new();
    let mut hz = Vec::new();
    for g in code.generators() {
        let (x, z) = (g.x_words()[0], g.z_words()[0]);
        match (x != 0, z != 0) {
            (true, false) => hx.push(x),
            (false, true) => hz.push(z),
            _ => return Err(Error::Unsupported(format!("{} is not a CSS code", code.family()))),
        }
    }
    let lx = code.logical_x();
    let lz = code.logical_z();
    if site_mask(lx, Letter::X) != lx.x_words()[0] || lx.z_words()[0] != 0 || lz.x_words()[0] != 0 {
        return Err(Error::Unsupported("logical representatives are not of CSS type".into()));
    }
    let s = order[j];
    let mut mx = 0u64;
    let mut mz = 0u64;
    for t in 0..j {
        match bases[t] {
            Letter::X => mx |= 1 << order[t],
            Letter::Z => mz |= 1 << order[t],
            _ => {}
        }
    }
    let unmeasured = order[j + 1..].iter().fold(0u64, |m, &q| m | 1 << q);
    let (xp, xnull) = affine_choices(&hx, lx.x_words()[0], mx | 1 << s | unmeasured, s, n)
        .ok_or_else(|| Error::InvalidScheme(format!("no X̄ fits position {j}")))?;
    if xnull.len() > 20 {
        return Err(Error::Unsupported(format!("{} free directions for X̄ at position {j}", xnull.len())));
    }
    let mut best: Option<(u32, u64, u64)> = None;
    for a in 0u64..(1 << xnull.len()) {
        let v = xnull.iter().enumerate().fold(xp, |v, (i, d)| if a >> i & 1 == 1 { v ^ d } else { v });
        let key = ((v & unmeasured).count_ones(), v);
        if best.is_some_and(|(c, bv, _)| (c, bv) <= key) {
            continue;
        }
        if let Some((w, _)) = affine_choices(&hz, lz.z_words()[0], mz | 1 << s | (unmeasured & !v), s, n) {
            best = Some((key.0, v, w));
        }
    }
    let (_, v, w) = best.ok_or_else(|| Error::InvalidScheme(format!("no logical pair fits position {j}")))?;
    let bits = |m: u64| (0..n).filter(move |q| m >> q & 1 == 1);
    Ok((Pauli::on_sites(n, bits(v), Letter::X), Pauli::on_sites(n, bits(w), Letter::Z)))
}

fn grid_index(code: &StabilizerCode) -> impl Fn(usize, usize) -> usize + '_ {
    move |a, b| match code.layout() {
        Layout::Grid { coords, .. } | Layout::Layered { coords, .. } => {
            coords.iter().position(|&c| c == (a, b)).expect("coordinate on the lattice")
        }
        _ => panic!("code has no grid layout"),
    }
}

fn qpc_scheme(r: usize, m: usize) -> Result<(Scheme, CandidateGeneratorSequence)> {
    let code = codes::qpc(r, m)?;
    let n = r * m;
    let idx = |i: usize, j: usize| i * m + j;
    let order: Vec<usize> = (0..n).collect();
    let bases: Vec<Letter> = (0..n).map(|q| if q % m == m - 1 { Letter::Z } else { Letter::X }).collect();
    let logicals = (0..n)
        .map(|q| {
            let (i, j) = (q / m, q % m);
            let x = Pauli::on_sites(n, (0..m).map(|t| idx(i, t)), Letter::X);
            let mut z = Pauli::on_sites(n, (0..r).filter(|&t| t != i).map(|t| idx(t, m - 1)), Letter::Z);
            z.set_letter(idx(i, j), Letter::Z);
            (x, z)
        })
        .collect();
    let c = sweep_candidates(&code, &order, &bases);
    Ok((Scheme::new(format!("qpc({r},{m})-optimal"), Target::plain(code), order, bases, logicals)?, c))
}

fn five_qubit_scheme() -> Result<(Scheme, CandidateGeneratorSequence)> {
    let code = codes::five_qubit();
    let xs = ops(&["XIYYI", "IXIYY", "YIXIY", "YYIXI", "IYYIX"]);
    let zs = ops(&["ZYIIY", "YZYII", "IYZYI", "IIYZY", "YIIYZ"]);
    let c = CandidateGeneratorSequence::new(&code, ops(&["XXYIY", "YXXYI", "IYXXY", "YIYXX"]))?;
    let s = Scheme::new("five-qubit-optimal", Target::plain(code), (0..5).collect(), vec![Letter::Y; 5], xs.into_iter().zip(zs).collect())?;
    Ok((s, c))
}

fn steane_scheme() -> Result<(Scheme, CandidateGeneratorSequence)> {
    let code = codes::steane();
    use Letter::{X, Z};
    let bases = vec![X, Z, Z, Z, X, X, Z];
    let xs = ops(&["XXIIXII", "XXIIXII", "XIXIIIX", "XIIXIXI", "IIIIXXX", "IIIIXXX", "IIIIXXX"]);
    let zs = ops(&["ZIZIIIZ", "IZIZIIZ", "IIZZZII", "IZIZIIZ", "IIZZZII", "IZZIIZI", "IZIZIIZ"]);
    let c = CandidateGeneratorSequence::new(&code, ops(&["ZZZZIII", "IXIXXXI", "IIXXIXX", "XIIXXIX", "IZIZZZI", "IIZZIZZ"]))?;
    let s = Scheme::new("steane-optimal", Target::plain(code), (0..7).collect(), bases, xs.into_iter().zip(zs).collect())?;
    Ok((s, c))
}

fn css_scheme(id: String, code: StabilizerCode, order: Vec<usize>, bases: Vec<Letter>) -> Result<(Scheme, CandidateGeneratorSequence)> {
    let logicals = (0..order.len()).map(|j| css_logical_pair(&code, &order, &bases, j)).collect::<Result<Vec<_>>>()?;
    let c = sweep_candidates(&code, &order, &bases);
    Ok((Scheme::new(id, Target::plain(code), order, bases, logicals)?, c))
}

/// Serpentine: odd layers left to right in Z (last column X), even layers right to left in X.
fn standard_scheme(r: usize, m: usize) -> Result<(Scheme, CandidateGeneratorSequence)> {
    let code = codes::standard_surface(r, m)?;
    let at = grid_index(&code);
    let (mut order, mut bases) = (Vec::new(), Vec::new());
    for l in 1..=2 * r - 1 {
        if l % 2 == 1 {
            for c in (1..=2 * m - 1).step_by(2) {
                order.push(at(l, c));
                bases.push(if c == 2 * m - 1 { Letter::X } else { Letter::Z });
            }
        } else {
            for c in (2..=2 * m - 2).rev().step_by(2) {
                order.push(at(l, c));
                bases.push(Letter::X);
            }
        }
    }
    drop(at);
    css_scheme(format!("standard({r},{m})-optimal"), code, order, bases)
}

/// Two-front diagonal order on the rotated lattice (1-based vertices, with
/// the BM basis of each). Diagonals `k = i + j` are taken alternately from
/// the top-left and bottom-right corners; the middle diagonal comes last.
pub(crate) fn rotated_order(r: usize, m: usize) -> Result<Vec<(usize, usize, Letter)>> {
    if r > m {
        return Err(Error::Unsupported(format!("rotated({r},{m}): only r <= m has a built-in scheme")));
    }
    let mid = (r + m + 2) / 2;
    let left: Vec<usize> = (2..mid).collect();
    let right: Vec<usize> = (mid + 1..=r + m).rev().collect();
    let rows = |k: usize| (k.saturating_sub(m).max(1))..=(r.min(k - 1));
    let in_middle = |k: usize| k > r && k <= m + 1;
    let mut out = Vec::with_capacity(r * m);
    let push_left = |k: usize, out: &mut Vec<(usize, usize, Letter)>| {
        if k % 2 == 0 {
            let is: Vec<usize> = rows(k).collect();
            for (p, &i) in is.iter().enumerate() {
                let last = p + 1 == is.len();
                out.push((i, k - i, if last && in_middle(k) && i == r { Letter::Z } else { Letter::X }));
            }
        } else {
            for i in rows(k).rev() {
                out.push((i, k - i, Letter::Z));
            }
        }
    };
    let push_right = |k: usize, out: &mut Vec<(usize, usize, Letter)>| {
        if k % 2 == 0 {
            let is: Vec<usize> = rows(k).rev().collect();
            for (p, &i) in is.iter().enumerate() {
                let last = p + 1 == is.len();
                out.push((i, k - i, if last && in_middle(k) && i == 1 { Letter::Z } else { Letter::X }));
            }
        } else {
            for i in rows(k) {
                out.push((i, k - i, Letter::Z));
            }
        }
    };
    let steps = left.len().max(right.len());
    for t in 0..steps {
        if let Some(&k) = left.get(t) {
            push_left(k, &mut out);
        }
        if let Some(&k) = right.get(t) {
            push_right(k, &mut out);
        }
    }
    for i in rows(mid) {
        out.push((i, mid - i, if mid % 2 == 0 { Letter::X } else { Letter::Z }));
    }
    Ok(out)
}

fn rotated_scheme(r: usize, m: usize) -> Result<(Scheme, CandidateGeneratorSequence)> {
    let code = codes::rotated_surface(r, m)?;
    let seq = rotated_order(r, m)?;
    let order = seq.iter().map(|&(i, j, _)| (i - 1) * m + (j - 1)).collect();
    let bases = seq.iter().map(|&(_, _, b)| b).collect();
    css_scheme(format!("rotated({r},{m})-optimal"), code, order, bases)
}

/// Root measured out in X first; then levels from the deepest up, all in Z.
fn tree_scheme(branching: &[usize]) -> Result<(Scheme, CandidateGeneratorSequence)> {
    let parent = codes::tree(branching)?;
    let t = parent.tree_layout().expect("tree layout").clone();
    let np = parent.n();
    let k = |v: usize| {
        let mut p = Pauli::on_sites(np, t.neighbours(v), Letter::Z);
        p.set_letter(v, Letter::X);
        p
    };
    let product = |mut acc: Pauli, vs: &mut dyn Iterator<Item = usize>| {
        for v in vs {
            acc.mul_assign_unchecked(&k(v));
        }
        acc
    };
    let target = Target::new(parent.clone(), vec![PreStep { site: 0, letter: Letter::X }])?;
    let depth_max = *t.depth.iter().max().unwrap();
    let mut vertices: Vec<usize> = Vec::new();
    for d in (1..=depth_max).rev() {
        vertices.extend((1..np).filter(|&v| t.depth[v] == d));
    }
    let mut logicals = Vec::with_capacity(vertices.len());
    for &v in &vertices {
        let d = t.depth[v];
        let zr = Pauli::single(np, 0, Letter::Z);
        let x = if d % 2 == 1 {
            product(zr, &mut (0..=(d - 1) / 2).map(|i| t.anc(v, 2 * i)))
        } else {
            product(zr, &mut (0..=(d - 2) / 2).map(|i| t.anc(v, 2 * i + 1)))
        };
        let z = if d % 2 == 0 {
            product(k(0), &mut (0..=(d - 2) / 2).map(|i| t.anc(v, 2 * i)))
        } else {
            product(k(0), &mut (0..(d - 1) / 2).map(|i| t.anc(v, 2 * i + 1)))
        };
        logicals.push((target.reduce_op(&x)?.with_sign(1), target.reduce_op(&z)?.with_sign(1)));
    }
    let order: Vec<usize> = vertices.iter().map(|&v| target.site_map().iter().position(|&s| s == v).unwrap()).collect();
    let bases = vec![Letter::Z; order.len()];
    let c = sweep_candidates(target.code(), &order, &bases);
    Ok((Scheme::new(format!("{}-optimal", parent.family()), target, order, bases, logicals)?, c))
}

/// The optimal scheme of a family together with its candidate sequence.
pub fn build_optimal(family: &Family) -> Result<(Scheme, CandidateGeneratorSequence)> {
    match family {
        Family::Qpc(r, m) => qpc_scheme(*r, *m),
        Family::FiveQubit => five_qubit_scheme(),
        Family::Steane => steane_scheme(),
        Family::Standard(r, m) => standard_scheme(*r, *m),
        Family::Rotated(r, m) => rotated_scheme(*r, *m),
        Family::Tree(b) => tree_scheme(b),
    }
}
