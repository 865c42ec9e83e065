use super::Coloring;
use crate::error::{Error, Result};
use crate::families::{shift_graph, shift_graph_over};
use crate::graph::{Family, Graph};
use crate::tuplespace::GroundSet;

const TOWER_GUARD: u128 = 1 << 16;
const VERTEX_GUARD: u128 = 1 << 24;

/// `tower(0, m) = m`, `tower(t + 1, m) = 2^tower(t, m)`; `None` past `u128`.
pub fn tower(t: usize, m: usize) -> Option<u128> {
    let mut v = m as u128;
    for _ in 0..t {
        if v >= 127 {
            return None;
        }
        v = 1u128 << v;
    }
    Some(v)
}

fn bits_for(palette: u32) -> u32 {
    if palette <= 2 {
        1
    } else {
        32 - (palette - 1).leading_zeros()
    }
}

/// Color of the pair `(x, y)` of distinct `len`-bit strings: which half
/// (increasing or decreasing pair) and the first index where they differ.
fn eh(x: u64, y: u64, len: u32) -> u32 {
    let first_diff = len - 1 - (63 - (x ^ y).leading_zeros());
    let half = u32::from(x > y);
    half * len + first_diff
}

fn string_length(ground: &GroundSet) -> Result<usize> {
    let m = match ground.atoms().first() {
        Some(crate::tuplespace::GroundAtom::Tagged { tag, payload }) if tag == "bits" => payload.len(),
        _ => return Err(Error::NonBinaryGround),
    };
    if m == 0 || m > 16 || *ground.atoms() != *GroundSet::binary_strings(m).atoms() {
        return Err(Error::NonBinaryGround);
    }
    Ok(m)
}

/// Colors `Sh_2^sym` over all binary strings of length `m` with `2m` colors.
pub fn eh_pair_coloring(ground: &GroundSet) -> Result<(Graph, Coloring)> {
    let m = string_length(ground)?;
    let g = shift_graph_over(ground, 2, true)?;
    let positions = shift_graph(2, ground.len(), true)?;
    let colors = positions
        .vertices()
        .iter()
        .map(|t| {
            let p = t.int_values().unwrap();
            eh(p[0] as u64, p[1] as u64, m as u32)
        })
        .collect();
    Ok((g, Coloring { colors, palette: 2 * m as u32 }))
}

fn palette_at(r: usize, len: u32) -> u32 {
    if r == 2 {
        2 * len
    } else {
        2 * bits_for(palette_at(r - 1, len))
    }
}

/// Palette of [`recursive_shift_coloring`]`(r, m)`.
pub fn recursive_palette(r: usize, m: usize) -> Option<u32> {
    let len = tower(r.checked_sub(2)?, m)?;
    Some(palette_at(r, u32::try_from(len).ok()?))
}

fn color_at(r: usize, len: u32, u: &[u64]) -> Result<u32> {
    if r == 2 {
        return Ok(eh(u[0], u[1], len));
    }
    let a = color_at(r - 1, len, &u[..r - 1])?;
    let b = color_at(r - 1, len, &u[1..])?;
    if a == b {
        return Err(Error::Invariant(format!("consecutive windows of {u:?} share color {a}")));
    }
    Ok(eh(a as u64, b as u64, bits_for(palette_at(r - 1, len))))
}

/// Colors `Sh_r^sym` over a ground set of `tower(r-1, m)` binary strings by
/// mapping `u` to the pair of colors of its two `(r-1)`-windows.
pub fn recursive_shift_coloring(r: usize, m: usize) -> Result<(Graph, Coloring)> {
    if r < 2 || m == 0 {
        return Err(Error::InvalidParameter("need r >= 2 and m >= 1".into()));
    }
    let size = tower(r - 1, m).unwrap_or(u128::MAX);
    if size > TOWER_GUARD {
        return Err(Error::TowerTooLarge(size));
    }
    let vertices = crate::tuplespace::falling_factorial(size as usize, r);
    if vertices > VERTEX_GUARD {
        return Err(Error::InvalidParameter(format!("{vertices} vertices exceed the materialization limit")));
    }
    let len = tower(r - 2, m).unwrap() as u32;
    let ground = GroundSet::binary_strings(len as usize);
    if r == 2 {
        return eh_pair_coloring(&ground);
    }
    let g = shift_graph_over(&ground, r, true)?;
    let positions = shift_graph(r, ground.len(), true)?;
    let colors = positions
        .vertices()
        .iter()
        .map(|t| {
            let u: Vec<u64> = t.int_values().unwrap().iter().map(|&p| p as u64).collect();
            color_at(r, len, &u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((g, Coloring { colors, palette: palette_at(r, len) }))
}

/// Colors a cyclic symmetric graph by position along each rotation orbit:
/// 2 colors for even `r`, 3 for odd `r`.
pub fn cycle_coloring(g: &Graph) -> Result<Coloring> {
    let r = match g.family() {
        Family::CyclicSym { r, .. } => *r,
        other => return Err(Error::WrongFamily(format!("expected a cyclic graph, got {other:?}"))),
    };
    let colors = g
        .vertices()
        .iter()
        .map(|t| {
            let v = t.values();
            // steps from the least rotation of v to v itself
            let p = (0..r)
                .min_by(|&a, &b| v[a..].iter().chain(&v[..a]).cmp(v[b..].iter().chain(&v[..b])))
                .unwrap();
            if r % 2 == 1 && p == r - 1 {
                2
            } else {
                (p % 2) as u32
            }
        })
        .collect();
    Ok(Coloring { colors, palette: if r % 2 == 0 { 2 } else { 3 } })
}

/// 2-colors the paths of a successor map by parity of the distance from each
/// path's first vertex.
pub fn zorbit_coloring(successor: &[Option<usize>]) -> Result<Coloring> {
    let n = successor.len();
    let mut has_pred = vec![false; n];
    for s in successor.iter().flatten() {
        if *s >= n {
            return Err(Error::InvalidParameter(format!("successor {s} out of range")));
        }
        if std::mem::replace(&mut has_pred[*s], true) {
            return Err(Error::NotInjective);
        }
    }
    let mut colors = vec![u32::MAX; n];
    for start in (0..n).filter(|&v| !has_pred[v]) {
        let mut cur = Some(start);
        let mut parity = 0;
        while let Some(v) = cur {
            colors[v] = parity;
            parity ^= 1;
            cur = successor[v];
        }
    }
    if let Some(v) = colors.iter().position(|&c| c == u32::MAX) {
        return Err(Error::CycleDetected(v));
    }
    Ok(Coloring::tight(colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chroma::validate;
    use crate::families::cyclic_sym;

    #[test]
    fn tower_values() {
        assert_eq!(tower(0, 3), Some(3));
        assert_eq!(tower(2, 1), Some(4));
        assert_eq!(tower(2, 2), Some(16));
        assert_eq!(tower(3, 3), None);
    }

    #[test]
    fn eh_small() {
        let (g, c) = eh_pair_coloring(&GroundSet::binary_strings(1)).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(c.colors, vec![0, 1]);
        assert_eq!(eh(0b01, 0b10, 2), 0);
        for m in 1..=3 {
            let (g, c) = eh_pair_coloring(&GroundSet::binary_strings(m)).unwrap();
            assert!(c.palette as usize <= 2 * m);
            assert!(validate(&g, &c).unwrap().is_empty());
        }
        assert_eq!(eh_pair_coloring(&GroundSet::range(4)).unwrap_err(), Error::NonBinaryGround);
    }

    #[test]
    fn recursive_small() {
        let (g, c) = recursive_shift_coloring(3, 1).unwrap();
        assert_eq!(g.n(), 24);
        assert_eq!(c.palette, 4);
        assert!(validate(&g, &c).unwrap().is_empty());
        assert_eq!(recursive_shift_coloring(2, 2).unwrap().1.palette, 4);
        assert!(matches!(recursive_shift_coloring(4, 3), Err(Error::TowerTooLarge(_))));
        assert!(matches!(recursive_shift_coloring(4, 2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cycles() {
        for (r, pal) in [(2, 2), (4, 2), (5, 3)] {
            let g = cyclic_sym(r, r).unwrap();
            let c = cycle_coloring(&g).unwrap();
            assert_eq!(c.palette, pal);
            assert!(validate(&g, &c).unwrap().is_empty());
        }
        let sh = shift_graph(2, 3, false).unwrap();
        assert!(matches!(cycle_coloring(&sh), Err(Error::WrongFamily(_))));
    }

    #[test]
    fn zorbit() {
        assert_eq!(zorbit_coloring(&[Some(1), Some(2), None]).unwrap().colors, vec![0, 1, 0]);
        let c = zorbit_coloring(&[Some(1), None, Some(3), None]).unwrap();
        assert_eq!(c.colors, vec![0, 1, 0, 1]);
        assert_eq!(zorbit_coloring(&[Some(1), Some(0)]), Err(Error::CycleDetected(0)));
        assert_eq!(zorbit_coloring(&[Some(2), Some(2), None]), Err(Error::NotInjective));
    }
}
