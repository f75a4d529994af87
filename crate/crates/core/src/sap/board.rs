//! Finite box of the honeycomb lattice with integer indexing.
//!
//! Honeycomb vertices are the triangles of the triangular lattice: the up
//! triangle `U(q,r)` has corners `(q,r), (q+1,r), (q,r+1)` and the down
//! triangle `D(q,r)` has corners `(q+1,r), (q,r+1), (q+1,r+1)`. Neighbour
//! slot 1 is always the edge crossing a horizontal triangular edge.

use crate::lattice::Axial;

pub const NONE: u32 = u32::MAX;

/// A honeycomb vertex, i.e. a triangle of the triangular lattice.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct Cell {
    pub q: i32,
    pub r: i32,
    pub up: bool,
}

impl Cell {
    pub const fn up(q: i32, r: i32) -> Cell {
        Cell { q, r, up: true }
    }

    pub const fn down(q: i32, r: i32) -> Cell {
        Cell { q, r, up: false }
    }

    pub fn neighbors(self) -> [Cell; 3] {
        let Cell { q, r, up } = self;
        if up {
            [Cell::down(q, r), Cell::down(q, r - 1), Cell::down(q - 1, r)]
        } else {
            [Cell::up(q, r), Cell::up(q, r + 1), Cell::up(q + 1, r)]
        }
    }

    pub fn corners(self) -> [Axial; 3] {
        let Cell { q, r, up } = self;
        if up {
            [(q, r), (q + 1, r), (q, r + 1)]
        } else {
            [(q + 1, r), (q, r + 1), (q + 1, r + 1)]
        }
    }

    pub fn translate(self, dq: i32, dr: i32) -> Cell {
        Cell {
            q: self.q + dq,
            r: self.r + dr,
            ..self
        }
    }
}

/// Horizontal triangular edge `(j,b)–(j+1,b)` crossed by the honeycomb edge
/// `a–b`, as `(b, j)`, if it is one.
pub fn horizontal_crossing(a: Cell, b: Cell) -> Option<(i32, i32)> {
    let (u, d) = if a.up { (a, b) } else { (b, a) };
    (u.up && !d.up && d.q == u.q && d.r == u.r - 1).then_some((u.r, u.q))
}

#[derive(Clone, Debug)]
pub struct Board {
    off: i32,
    w: i32,
    nbr: Vec<[u32; 3]>,
}

impl Board {
    /// All cells with `|q|, |r| ≤ off`.
    pub fn new(off: i32) -> Board {
        let w = 2 * off + 1;
        let mut b = Board {
            off,
            w,
            nbr: Vec::new(),
        };
        let n = (w * w * 2) as usize;
        b.nbr = (0..n as u32)
            .map(|id| b.cell(id).neighbors().map(|c| b.id(c).unwrap_or(NONE)))
            .collect();
        b
    }

    pub fn len(&self) -> usize {
        self.nbr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbr.is_empty()
    }

    pub fn id(&self, c: Cell) -> Option<u32> {
        let (q, r) = (c.q + self.off, c.r + self.off);
        if q < 0 || r < 0 || q >= self.w || r >= self.w {
            return None;
        }
        Some(((r * self.w + q) * 2 + c.up as i32) as u32)
    }

    pub fn cell(&self, id: u32) -> Cell {
        let up = id % 2 == 1;
        let k = (id / 2) as i32;
        Cell {
            q: k % self.w - self.off,
            r: k / self.w - self.off,
            up,
        }
    }

    pub fn neighbors(&self, id: u32) -> &[u32; 3] {
        &self.nbr[id as usize]
    }

    /// Crossed horizontal edge `(row, j)` for the edge leaving `id` by `slot`.
    #[inline]
    pub fn crossing(&self, id: u32, slot: usize) -> Option<(i32, i32)> {
        if slot != 1 {
            return None;
        }
        let c = self.cell(id);
        Some(if c.up { (c.r, c.q) } else { (c.r + 1, c.q) })
    }

    /// Graph distances from `src` inside the box.
    pub fn distances(&self, src: u32) -> Vec<u32> {
        let mut d = vec![u32::MAX; self.len()];
        let mut queue = std::collections::VecDeque::from([src]);
        d[src as usize] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if w != NONE && d[w as usize] == u32::MAX {
                    d[w as usize] = d[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        d
    }
}
