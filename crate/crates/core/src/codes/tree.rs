use super::{Layout, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, Pauli};

/// Rooted tree numbered level by level; vertex 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLayout {
    pub branching: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// Vertex held by each site; the identity until a site is measured out.
    pub sites: Vec<usize>,
}

impl TreeLayout {
    pub fn new(branching: &[usize]) -> TreeLayout {
        let mut parent = vec![None];
        let mut children = vec![Vec::new()];
        let mut depth = vec![0];
        let mut level = vec![0usize];
        for (d, &b) in branching.iter().enumerate() {
            let mut next = Vec::with_capacity(level.len() * b);
            for &v in &level {
                for _ in 0..b {
                    let w = parent.len();
                    parent.push(Some(v));
                    children.push(Vec::new());
                    depth.push(d + 1);
                    children[v].push(w);
                    next.push(w);
                }
            }
            level = next;
        }
        let sites = (0..parent.len()).collect();
        TreeLayout { branching: branching.to_vec(), parent, children, depth, sites }
    }

    pub fn vertices(&self) -> usize {
        self.parent.len()
    }

    /// Ancestor `k` steps above `v` (`anc(v, 0) = v`).
    pub fn anc(&self, v: usize, k: usize) -> usize {
        let mut u = v;
        for _ in 0..k {
            u = self.parent[u].expect("ancestor above the root");
        }
        u
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent[v].into_iter().chain(self.children[v].iter().copied())
    }

    /// Vertices on the path from `v` up to (excluding) the root.
    pub fn path(&self, v: usize) -> Vec<usize> {
        (0..self.depth[v]).map(|k| self.anc(v, k)).collect()
    }

    pub fn site_of(&self, v: usize) -> Option<usize> {
        self.sites.iter().position(|&u| u == v)
    }

    pub(crate) fn without(&self, site: usize) -> TreeLayout {
        let mut t = self.clone();
        t.sites.remove(site);
        t
    }
}

/// Graph-state code on a rooted tree: `K_v = X_v ∏_{w ∈ N(v)} Z_w` for every
/// non-root vertex; `Z̄ = K_root` and `X̄ = Z_root K_c` for the first child `c`.
pub fn tree(branching: &[usize]) -> Result<StabilizerCode> {
    if branching.is_empty() || branching.contains(&0) {
        return Err(Error::InvalidParams(format!("tree branching {branching:?} must be non-empty and positive")));
    }
    let t = TreeLayout::new(branching);
    let n = t.vertices();
    let k = |v: usize| {
        let mut p = Pauli::on_sites(n, t.neighbours(v), Letter::Z);
        p.set_letter(v, Letter::X);
        p
    };
    let gens = (1..n).map(k).collect();
    let lz = k(0);
    let c = t.children[0][0];
    let lx = Pauli::single(n, 0, Letter::Z).multiply(&k(c))?;
    let name = format!("tree({})", branching.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","));
    Ok(StabilizerCode::new(name, gens, lx, lz)?.with_layout(Layout::Tree(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trees() {
        let c = tree(&[2, 2]).unwrap();
        assert_eq!(c.n(), 7);
        assert_eq!(c.generators().len(), 6);
        // X̄ = X_c ∏_{children of c} Z
        assert_eq!(c.logical_x().to_string(), "+IXIZZII");
        let star = tree(&[3]).unwrap();
        assert_eq!(star.logical_z().to_string(), "+XZZZ");
        assert!(tree(&[]).is_err());
    }

    #[test]
    fn ancestors_reach_the_root() {
        let t = TreeLayout::new(&[2, 3, 2]);
        for v in 0..t.vertices() {
            assert_eq!(t.anc(v, t.depth[v]), 0);
        }
        assert_eq!(t.vertices(), 1 + 2 + 6 + 12);
        assert_eq!(t.path(t.vertices() - 1).len(), 3);
    }
}
