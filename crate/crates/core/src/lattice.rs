//! Periodic hypercubic lattices `L^d` and their odd/even elementary-hypercube
//! block partitions.
//!
//! Vertex indexing is row-major with axis 0 fastest:
//! `i = Σ_j x_j · L^j`.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    side: usize,
    size: usize,
    strides: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedGeometry(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if side < 2 || !side.is_multiple_of(2) {
            return Err(Error::UnsupportedGeometry(format!(
                "side {side} must be even and at least 2"
            )));
        }
        let mut strides = Vec::with_capacity(dim);
        let mut size = 1usize;
        for _ in 0..dim {
            strides.push(size);
            size = size
                .checked_mul(side)
                .ok_or(Error::SizeOverflow { dim, side })?;
        }
        Ok(Self {
            dim,
            side,
            size,
            strides,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of vertices `N = L^d`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn coords(&self, index: usize) -> Result<Vec<usize>> {
        self.check_index(index)?;
        let mut rest = index;
        Ok((0..self.dim)
            .map(|_| {
                let x = rest % self.side;
                rest /= self.side;
                x
            })
            .collect())
    }

    pub fn index(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: coords.len(),
                right: self.dim,
            });
        }
        if let Some(&x) = coords.iter().find(|&&x| x >= self.side) {
            return Err(Error::IndexOutOfRange {
                index: x,
                dim: self.side,
            });
        }
        Ok(coords.iter().zip(&self.strides).map(|(x, s)| x * s).sum())
    }

    /// The `2d` neighbours `x ± ê_j` under periodic wrap, `+` before `−`
    /// for each axis. At `L = 2` the pair along an axis coincides.
    pub fn neighbors(&self, index: usize) -> Result<Vec<usize>> {
        let coords = self.coords(index)?;
        let mut out = Vec::with_capacity(2 * self.dim);
        for (j, &x) in coords.iter().enumerate() {
            let up = (x + 1) % self.side;
            let down = (x + self.side - 1) % self.side;
            out.push(index - x * self.strides[j] + up * self.strides[j]);
            out.push(index - x * self.strides[j] + down * self.strides[j]);
        }
        Ok(out)
    }

    /// Periodic distance along one axis.
    #[inline]
    fn axis_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        d.min(self.side - d)
    }

    pub fn linf_distance(&self, a: usize, b: usize) -> Result<usize> {
        let (ca, cb) = (self.coords(a)?, self.coords(b)?);
        Ok(ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| self.axis_distance(x, y))
            .max()
            .unwrap_or(0))
    }

    pub fn l1_distance(&self, a: usize, b: usize) -> Result<usize> {
        let (ca, cb) = (self.coords(a)?, self.coords(b)?);
        Ok(ca
            .iter()
            .zip(&cb)
            .map(|(&x, &y)| self.axis_distance(x, y))
            .sum())
    }

    /// Vertices within periodic L∞ distance `radius` of any vertex.
    pub fn linf_ball_size(&self, radius: usize) -> usize {
        let width = (2 * radius + 1).min(self.side);
        width.checked_pow(self.dim as u32).unwrap_or(usize::MAX).min(self.size)
    }

    /// Number of undirected links `d·N` (coincident pairs at `L = 2` count
    /// once per direction of traversal, matching the block structure).
    pub fn link_count(&self) -> usize {
        self.dim * self.size
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.size,
            });
        }
        Ok(())
    }
}

pub fn make_lattice(dim: usize, side: usize) -> Result<Lattice> {
    Lattice::new(dim, side)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Blocks anchored at vertices whose coordinates are all even.
    Odd,
    /// Blocks anchored at vertices whose coordinates are all odd.
    Even,
}

impl Parity {
    fn anchor_offset(self) -> usize {
        match self {
            Parity::Odd => 0,
            Parity::Even => 1,
        }
    }
}

/// Disjoint elementary hypercubes of one parity, stored flat: block `b`
/// occupies `vertices[b·2^d .. (b+1)·2^d]`, corner `c` at offset `c` where
/// bit `j` of `c` is the step along axis `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    parity: Parity,
    dim: usize,
    vertices: Vec<usize>,
    positions: Vec<usize>,
}

impl BlockPartition {
    pub fn new(lattice: &Lattice, parity: Parity) -> Self {
        let d = lattice.dim();
        let half = lattice.side() / 2;
        let corners = 1usize << d;
        let blocks = lattice.size() >> d;
        let offset = parity.anchor_offset();
        let side = lattice.side();
        let strides = lattice.strides();

        let mut vertices = Vec::with_capacity(lattice.size());
        let mut anchor = vec![0usize; d];
        for b in 0..blocks {
            let mut rest = b;
            for a in anchor.iter_mut() {
                *a = 2 * (rest % half) + offset;
                rest /= half;
            }
            for c in 0..corners {
                let v: usize = (0..d)
                    .map(|j| ((anchor[j] + ((c >> j) & 1)) % side) * strides[j])
                    .sum();
                vertices.push(v);
            }
        }
        let mut positions = vec![0usize; vertices.len()];
        for (p, &v) in vertices.iter().enumerate() {
            positions[v] = p;
        }
        Self {
            parity,
            dim: d,
            vertices,
            positions,
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn block_len(&self) -> usize {
        1 << self.dim
    }

    pub fn block_count(&self) -> usize {
        self.vertices.len() >> self.dim
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Inverse of [`vertices`](Self::vertices): flat block position of each vertex.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn blocks(&self) -> std::slice::ChunksExact<'_, usize> {
        self.vertices.chunks_exact(self.block_len())
    }

    /// Intra-block links `(lower corner, upper corner)`, `d·2^(d−1)` per block.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.block_count() * self.dim * (self.block_len() / 2));
        for block in self.blocks() {
            for c in 0..block.len() {
                for j in 0..self.dim {
                    if c & (1 << j) == 0 {
                        out.push((block[c], block[c | (1 << j)]));
                    }
                }
            }
        }
        out
    }
}

pub fn block_partition(lattice: &Lattice, parity: Parity) -> BlockPartition {
    BlockPartition::new(lattice, parity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn sizes() {
        assert_eq!(make_lattice(2, 4).unwrap().size(), 16);
        assert_eq!(make_lattice(3, 8).unwrap().size(), 512);
        let l = make_lattice(9, 2).unwrap();
        assert_eq!(l.size(), 512);
        assert_eq!(l.neighbors(0).unwrap().len(), 18);
    }

    #[test]
    fn geometry_errors() {
        assert!(matches!(make_lattice(2, 3), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(make_lattice(2, 0), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(make_lattice(0, 4), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(make_lattice(20, 1 << 10), Err(Error::SizeOverflow { .. })));
    }

    #[test]
    fn coordinates() {
        let l = make_lattice(2, 4).unwrap();
        assert_eq!(l.coords(7).unwrap(), vec![3, 1]);
        assert_eq!(l.coords(0).unwrap(), vec![0, 0]);
        assert_eq!(l.index(&[3, 1]).unwrap(), 7);
        assert!(l.coords(16).is_err());
        assert!(l.index(&[4, 0]).is_err());
        let big = make_lattice(3, 16).unwrap();
        for i in 0..big.size() {
            assert_eq!(big.index(&big.coords(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn one_dimensional_blocks() {
        let l = make_lattice(1, 4).unwrap();
        let odd: Vec<_> = block_partition(&l, Parity::Odd).blocks().map(<[usize]>::to_vec).collect();
        let even: Vec<_> = block_partition(&l, Parity::Even).blocks().map(<[usize]>::to_vec).collect();
        assert_eq!(odd, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(even, vec![vec![1, 2], vec![3, 0]]);
    }

    #[test]
    fn side_two_blocks() {
        let l = make_lattice(2, 2).unwrap();
        let odd = block_partition(&l, Parity::Odd);
        let even = block_partition(&l, Parity::Even);
        assert_eq!(odd.vertices(), &[0, 1, 2, 3]);
        assert_eq!(even.vertices(), &[3, 2, 1, 0]);
    }

    #[test]
    fn link_count_example() {
        let l = make_lattice(2, 4).unwrap();
        let odd = block_partition(&l, Parity::Odd).links().len();
        let even = block_partition(&l, Parity::Even).links().len();
        assert_eq!((odd, even), (16, 16));
        assert_eq!(odd + even, l.link_count());
    }

    /// Undirected lattice link keyed by (lower endpoint along the axis, axis).
    fn link_key(l: &Lattice, a: usize, b: usize) -> (usize, usize) {
        let (ca, cb) = (l.coords(a).unwrap(), l.coords(b).unwrap());
        let axis = (0..l.dim()).find(|&j| ca[j] != cb[j]).unwrap();
        let lower = if (ca[axis] + 1) % l.side() == cb[axis] { a } else { b };
        (lower, axis)
    }

    #[test]
    fn partitions_cover_and_links_are_unique() {
        for d in 1..=6 {
            for side in (2..=64).step_by(2) {
                let Ok(l) = make_lattice(d, side) else { continue };
                if l.size() > 4096 {
                    continue;
                }
                let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
                for parity in [Parity::Odd, Parity::Even] {
                    let part = block_partition(&l, parity);
                    let mut seen = vec![false; l.size()];
                    for &v in part.vertices() {
                        assert!(!seen[v], "vertex {v} repeated in {parity:?} d={d} L={side}");
                        seen[v] = true;
                    }
                    assert!(seen.iter().all(|&s| s));
                    for (block_idx, block) in part.blocks().enumerate() {
                        let anchor = l.coords(block[0]).unwrap();
                        let want = if parity == Parity::Odd { 0 } else { 1 };
                        assert!(anchor.iter().all(|x| x % 2 == want), "block {block_idx}");
                    }
                    for (a, b) in part.links() {
                        assert_eq!(l.l1_distance(a, b).unwrap(), 1);
                        *counts.entry(link_key(&l, a, b)).or_default() += 1;
                    }
                }
                if side > 2 {
                    assert_eq!(counts.len(), l.link_count());
                    assert!(counts.values().all(|&c| c == 1));
                } else {
                    // Both traversal directions land on the same vertex pair.
                    assert_eq!(counts.values().sum::<usize>(), l.link_count());
                }
            }
        }
    }

    #[test]
    fn distances() {
        let l = make_lattice(2, 8).unwrap();
        let a = l.index(&[0, 0]).unwrap();
        let b = l.index(&[7, 3]).unwrap();
        assert_eq!(l.linf_distance(a, b).unwrap(), 3);
        assert_eq!(l.l1_distance(a, b).unwrap(), 4);
        assert_eq!(l.linf_ball_size(1), 9);
        assert_eq!(l.linf_ball_size(10), 64);
    }
}
