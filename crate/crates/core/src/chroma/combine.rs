use super::Coloring;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Combines colorings of induced pieces covering the vertex set. Part `i`'s
/// coloring lists colors in the order of its vertex list; each vertex takes
/// its color from the first part containing it, shifted by the palettes of
/// the earlier parts.
pub fn sum_coloring(g: &Graph, parts: &[(Vec<usize>, Coloring)]) -> Result<Coloring> {
    let mut colors = vec![u32::MAX; g.n()];
    let mut offset = 0u32;
    for (vertices, c) in parts {
        if c.colors.len() < vertices.len() {
            return Err(Error::MissingVertex(c.colors.len()));
        }
        for (i, &v) in vertices.iter().enumerate() {
            if v >= g.n() {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            if colors[v] == u32::MAX {
                colors[v] = offset + c.colors[i];
            }
        }
        offset = offset
            .checked_add(c.palette)
            .ok_or_else(|| Error::InvalidParameter("palette overflow".into()))?;
    }
    if let Some(v) = colors.iter().position(|&c| c == u32::MAX) {
        return Err(Error::CoverGap(format!("vertex {v}")));
    }
    Ok(Coloring { colors, palette: offset })
}

/// Combines colorings of spanning subgraphs whose edge sets cover `g`'s
/// edges. The color of `v` is the mixed-radix number with digit `i` equal to
/// part `i`'s color, part 0 least significant.
pub fn product_coloring(g: &Graph, parts: &[(Vec<(usize, usize)>, Coloring)]) -> Result<Coloring> {
    let mut covered: Vec<(usize, usize)> =
        parts.iter().flat_map(|(e, _)| e.iter().map(|&(u, v)| (u.min(v), u.max(v)))).collect();
    covered.sort_unstable();
    covered.dedup();
    if let Some(e) = g.edges().iter().find(|e| covered.binary_search(e).is_err()) {
        return Err(Error::CoverGap(format!("edge ({}, {})", e.0, e.1)));
    }
    let mut colors = vec![0u32; g.n()];
    let mut radix = 1u32;
    for (_, c) in parts {
        if c.colors.len() < g.n() {
            return Err(Error::MissingVertex(c.colors.len()));
        }
        for (v, col) in colors.iter_mut().enumerate() {
            *col += c.colors[v] * radix;
        }
        radix = radix
            .checked_mul(c.palette.max(1))
            .ok_or_else(|| Error::InvalidParameter("palette overflow".into()))?;
    }
    Ok(Coloring { colors, palette: radix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chroma::{chi_exact, validate};
    use crate::families::shift_graph;
    use crate::graph::Family;

    fn c4() -> Graph {
        Graph::plain(Family::Custom { name: "C4".into() }, 4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn sum_of_two_halves() {
        let g = shift_graph(2, 4, false).unwrap();
        let halves = [vec![0, 1, 2], vec![3, 4, 5]];
        let parts: Vec<_> = halves
            .iter()
            .map(|h| {
                let sub = g.induced(h, Family::Custom { name: "part".into() }).unwrap();
                (h.clone(), chi_exact(&sub, None).unwrap().witness)
            })
            .collect();
        let c = sum_coloring(&g, &parts).unwrap();
        assert!(validate(&g, &c).unwrap().is_empty());
        assert_eq!(c.palette, parts.iter().map(|p| p.1.palette).sum::<u32>());
        let single = Coloring::tight(vec![0, 1, 0, 1]);
        assert_eq!(sum_coloring(&c4(), &[(vec![0, 1, 2, 3], single.clone())]).unwrap(), single);
        assert!(matches!(sum_coloring(&c4(), &[(vec![0, 1], single)]), Err(Error::CoverGap(_))));
    }

    #[test]
    fn product_of_matchings() {
        let g = c4();
        let m1 = (vec![(0, 1), (2, 3)], Coloring::tight(vec![0, 1, 0, 1]));
        let m2 = (vec![(1, 2), (3, 0)], Coloring::tight(vec![0, 0, 1, 1]));
        let c = product_coloring(&g, &[m1.clone(), m2]).unwrap();
        assert_eq!(c.palette, 4);
        assert!(validate(&g, &c).unwrap().is_empty());
        assert!(matches!(product_coloring(&g, &[m1]), Err(Error::CoverGap(_))));
    }
}
