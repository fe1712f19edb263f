use std::sync::OnceLock;

use sobol::params::JoeKuoD6;

use crate::error::{Error, Result};

/// Largest dimension covered by the Joe–Kuo `new-joe-kuo-6.21201` table.
pub const MAX_DIMENSION: usize = 21201;

const BITS: usize = 32;

fn table() -> &'static JoeKuoD6 {
    static TABLE: OnceLock<JoeKuoD6> = OnceLock::new();
    TABLE.get_or_init(JoeKuoD6::extended)
}

/// Direction integers `v_k = m_k · 2^(32-k)` for one coordinate (0-based).
fn directions(coord: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if coord == 0 {
        for (k, vk) in v.iter_mut().enumerate() {
            *vk = 1u32 << (BITS - 1 - k);
        }
        return v;
    }
    let p = &table().dim_params[coord - 1];
    let s = p.m.len();
    let a = p.a;
    for k in 0..s.min(BITS) {
        v[k] = p.m[k] << (BITS - 1 - k);
    }
    for k in s..BITS {
        let mut x = v[k - s] ^ (v[k - s] >> s);
        for j in 1..s {
            if (a >> (s - 1 - j)) & 1 == 1 {
                x ^= v[k - j];
            }
        }
        v[k] = x;
    }
    v
}

/// Unscrambled Sobol sequence in Gray-code order, starting at the origin.
#[derive(Clone, Debug)]
pub struct Sobol {
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u64,
}

impl Sobol {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIMENSION {
            return Err(Error::UnsupportedDimension {
                dim,
                max: MAX_DIMENSION,
            });
        }
        Ok(Sobol {
            directions: (0..dim).map(directions).collect(),
            state: vec![0; dim],
            index: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

impl Iterator for Sobol {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.index >= 1u64 << BITS {
            return None;
        }
        if self.index > 0 {
            // Flip the direction indexed by the lowest zero bit of index-1.
            let c = (!(self.index - 1)).trailing_zeros() as usize;
            for (x, v) in self.state.iter_mut().zip(&self.directions) {
                *x ^= v[c];
            }
        }
        self.index += 1;
        let scale = 1.0 / (1u64 << BITS) as f64;
        Some(self.state.iter().map(|&x| f64::from(x) * scale).collect())
    }
}

/// The first `n` points in `[0,1)^dim`.
pub fn sobol_points(dim: usize, n: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Sobol point count must be at least 1".into(),
        ));
    }
    Ok(Sobol::new(dim)?.take(n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_ints(p: &[f64]) -> Vec<u64> {
        p.iter().map(|&x| (x * 4294967296.0) as u64).collect()
    }

    #[test]
    fn one_dimensional_prefix() {
        let pts = sobol_points(1, 4).unwrap();
        assert_eq!(pts, vec![vec![0.0], vec![0.5], vec![0.75], vec![0.25]]);
    }

    #[test]
    fn first_point_is_origin() {
        for dim in [1, 7, 300] {
            let pts = sobol_points(dim, 1).unwrap();
            assert!(pts[0].iter().all(|&x| x == 0.0));
        }
        assert_eq!(
            sobol_points(2, 2).unwrap(),
            vec![vec![0.0, 0.0], vec![0.5, 0.5]]
        );
    }

    // Reference values from an independent unscrambled Joe–Kuo generator
    // (SciPy `qmc.Sobol(scramble=False)`), scaled by 2^32.
    #[test]
    fn matches_reference_generator() {
        let pts = sobol_points(5, 8).unwrap();
        assert_eq!(pts[4], vec![0.375, 0.375, 0.625, 0.875, 0.375]);
        assert_eq!(pts[7], vec![0.125, 0.625, 0.375, 0.125, 0.125]);

        let p = Sobol::new(40).unwrap().nth(1000).unwrap();
        let expected: [u64; 40] = [
            943718400, 415236096, 2227175424, 2906652672, 1203765248, 3896508416, 197132288,
            3862953984, 2151677952, 297795584, 364904448, 1094713344, 692060160, 1648361472,
            616562688, 1589641216, 3091202048, 1480589312, 4257218560, 3116367872, 2243952640,
            2361393152, 4081057792, 2319450112, 2503999488, 3896508416, 171966464, 4206886912,
            255852544, 1463812096, 633339904, 624951296, 1270874112, 2545942528, 3443523584,
            3309305856, 3644850176, 3569352704, 1321205760, 2059403264,
        ];
        assert_eq!(as_ints(&p), expected);

        let p = Sobol::new(MAX_DIMENSION).unwrap().nth(13).unwrap();
        assert_eq!(
            as_ints(&p[MAX_DIMENSION - 5..]),
            [805306368, 2415919104, 268435456, 3489660928, 1879048192]
        );
        assert_eq!(
            as_ints(&p[995..1002]),
            [268435456, 2415919104, 1342177280, 2952790016, 1342177280, 2952790016, 1879048192]
        );
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(matches!(
            Sobol::new(MAX_DIMENSION + 1),
            Err(Error::UnsupportedDimension { .. })
        ));
        assert!(Sobol::new(0).is_err());
        assert!(sobol_points(3, 0).is_err());
    }

    #[test]
    fn leading_block_is_a_dyadic_net() {
        // Any 2^k prefix hits every dyadic interval of width 2^-k once per coordinate.
        let pts = sobol_points(12, 64).unwrap();
        for d in 0..12 {
            let mut cells: Vec<usize> = pts.iter().map(|p| (p[d] * 64.0) as usize).collect();
            cells.sort_unstable();
            assert_eq!(cells, (0..64).collect::<Vec<_>>(), "coordinate {d}");
        }
    }
}
