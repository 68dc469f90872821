//! Fill-reducing orderings for grid-structured unknowns.

/// Unknowns below this count are ordered as given.
const LEAF_SIZE: usize = 64;

/// Geometric nested dissection of unknowns located at integer grid
/// coordinates. Returns `perm` with `perm[new] = old`.
///
/// Each level removes the grid line through the median of the longer extent;
/// both halves are ordered recursively and the separator is numbered last. A
/// single line separates any stencil whose couplings span at most one cell.
pub fn nested_dissection(coords: &[(i32, i32)]) -> Vec<usize> {
    let mut perm = Vec::with_capacity(coords.len());
    let mut nodes: Vec<usize> = (0..coords.len()).collect();
    dissect(coords, &mut nodes, &mut perm);
    perm
}

fn dissect(coords: &[(i32, i32)], nodes: &mut [usize], out: &mut Vec<usize>) {
    if nodes.len() <= LEAF_SIZE {
        out.extend_from_slice(nodes);
        return;
    }
    let (mut imin, mut imax, mut jmin, mut jmax) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for &k in nodes.iter() {
        let (i, j) = coords[k];
        imin = imin.min(i);
        imax = imax.max(i);
        jmin = jmin.min(j);
        jmax = jmax.max(j);
    }
    let along_x = imax - imin >= jmax - jmin;
    let key = |k: usize| if along_x { coords[k].0 } else { coords[k].1 };
    if imax - imin < 2 && jmax - jmin < 2 {
        out.extend_from_slice(nodes);
        return;
    }
    let mid = nodes.len() / 2;
    nodes.select_nth_unstable_by_key(mid, |&k| key(k));
    let split = key(nodes[mid]);
    // three-way partition: below, above, separator
    nodes.sort_unstable_by_key(|&k| {
        let v = key(k);
        if v < split {
            0
        } else if v > split {
            1
        } else {
            2
        }
    });
    let below = nodes.iter().take_while(|&&k| key(k) < split).count();
    let above = nodes[below..]
        .iter()
        .take_while(|&&k| key(k) > split)
        .count();
    let (low, rest) = nodes.split_at_mut(below);
    let (high, sep) = rest.split_at_mut(above);
    dissect(coords, low, out);
    dissect(coords, high, out);
    out.extend_from_slice(sep);
}

/// Inverse of a permutation.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_a_permutation() {
        let coords: Vec<(i32, i32)> = (0..40).flat_map(|j| (0..37).map(move |i| (i, j))).collect();
        let mut p = nested_dissection(&coords);
        p.sort_unstable();
        assert_eq!(p, (0..coords.len()).collect::<Vec<_>>());
    }

    #[test]
    fn last_block_is_a_grid_line() {
        let coords: Vec<(i32, i32)> = (0..20).flat_map(|j| (0..30).map(move |i| (i, j))).collect();
        let p = nested_dissection(&coords);
        let last = &p[p.len() - 20..];
        let i0 = coords[last[0]].0;
        assert!(last.iter().all(|&k| coords[k].0 == i0));
    }
}
