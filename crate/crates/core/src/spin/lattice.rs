use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Ring,
    Square {
        rows: usize,
        cols: usize,
        periodic: bool,
    },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGraph {
    n_sites: usize,
    edges: Vec<(usize, usize)>,
    geometry: Geometry,
}

impl LatticeGraph {
    /// Arbitrary simple graph; edges are unordered and must be unique.
    pub fn new(n_sites: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::with_geometry(n_sites, edges, Geometry::Custom)
    }

    fn with_geometry(
        n_sites: usize,
        edges: Vec<(usize, usize)>,
        geometry: Geometry,
    ) -> Result<Self> {
        if n_sites == 0 {
            return Err(invalid("lattice needs at least one site"));
        }
        let mut seen = std::collections::HashSet::new();
        for &(i, j) in &edges {
            if i == j || i >= n_sites || j >= n_sites {
                return Err(invalid(format!("bad edge ({i}, {j}) for {n_sites} sites")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(invalid(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(LatticeGraph {
            n_sites,
            edges,
            geometry,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn degree(&self, site: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| i == site || j == site)
            .count()
    }

    /// Nearest-neighbor count Z: 2 for a ring, 4 for a periodic square
    /// lattice, the maximum degree otherwise.
    pub fn coordination_number(&self) -> usize {
        match self.geometry {
            Geometry::Ring => 2,
            Geometry::Square { periodic: true, .. } => 4,
            _ => (0..self.n_sites).map(|s| self.degree(s)).max().unwrap_or(0),
        }
    }

    /// Ring or open chain versus anything with higher connectivity.
    pub fn is_one_dimensional(&self) -> bool {
        match self.geometry {
            Geometry::Ring => true,
            Geometry::Square { rows, cols, .. } => rows == 1 || cols == 1,
            Geometry::Custom => self.coordination_number() <= 2,
        }
    }
}

/// Periodic ring with edges `(i, i+1 mod n)`.
pub fn ring_lattice(n: usize) -> Result<LatticeGraph> {
    if n < 3 {
        return Err(invalid(format!("periodic ring needs n >= 3, got {n}")));
    }
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    LatticeGraph::with_geometry(n, edges, Geometry::Ring)
}

/// Row-major `rows × cols` grid with right and down bonds, wrapped when
/// `periodic`.
pub fn square_lattice(rows: usize, cols: usize, periodic: bool) -> Result<LatticeGraph> {
    if rows == 0 || cols == 0 {
        return Err(invalid("square lattice dimensions must be positive"));
    }
    if periodic && (rows < 3 || cols < 3) {
        return Err(invalid(format!(
            "periodic square lattice needs both dimensions >= 3, got {rows}x{cols}"
        )));
    }
    let site = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols || periodic {
                edges.push((site(r, c), site(r, (c + 1) % cols)));
            }
            if r + 1 < rows || periodic {
                edges.push((site(r, c), site((r + 1) % rows, c)));
            }
        }
    }
    LatticeGraph::with_geometry(
        rows * cols,
        edges,
        Geometry::Square {
            rows,
            cols,
            periodic,
        },
    )
}
