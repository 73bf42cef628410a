use super::Word;

/// Rank of the subgroup of a free group generated by `words`, via Stallings
/// folding: the folded core graph has rank `E - V + 1`.
pub fn free_subgroup_rank(words: &[Word]) -> usize {
    // Edges (from, generator, to), read positively.
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut vertices = 1usize;
    for w in words {
        let w = w.free_reduce();
        let letters = w.letters();
        if letters.is_empty() {
            continue;
        }
        let mut at = 0usize;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            if l.inverse {
                edges.push((next, l.generator, at));
            } else {
                edges.push((at, l.generator, next));
            }
            at = next;
        }
    }
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    loop {
        for e in edges.iter_mut() {
            *e = (find(&mut parent, e.0), e.1, find(&mut parent, e.2));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut merged = false;
        let mut by_source = std::collections::HashMap::new();
        let mut by_target = std::collections::HashMap::new();
        for &(a, g, b) in &edges {
            if let Some(&other) = by_source.get(&(a, g)) {
                if other != b {
                    let (x, y) = (find(&mut parent, other), find(&mut parent, b));
                    if x != y {
                        parent[x.max(y)] = x.min(y);
                        merged = true;
                    }
                }
            } else {
                by_source.insert((a, g), b);
            }
            if let Some(&other) = by_target.get(&(b, g)) {
                if other != a {
                    let (x, y) = (find(&mut parent, other), find(&mut parent, a));
                    if x != y {
                        parent[x.max(y)] = x.min(y);
                        merged = true;
                    }
                }
            } else {
                by_target.insert((b, g), a);
            }
        }
        if !merged {
            break;
        }
    }
    let mut used: Vec<usize> = edges.iter().flat_map(|&(a, _, b)| [a, b]).collect();
    used.push(find(&mut parent, 0));
    used.sort_unstable();
    used.dedup();
    edges.len() + 1 - used.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(free_subgroup_rank(&[]), 0);
        assert_eq!(free_subgroup_rank(&[w("a0"), w("a1")]), 2);
        assert_eq!(free_subgroup_rank(&[w("a0"), w("a0 a0")]), 1);
        assert_eq!(free_subgroup_rank(&[w("a0 a1"), w("a0"), w("a1")]), 2);
        assert_eq!(free_subgroup_rank(&[w("a0 a0"), w("a1 a0 A1")]), 2);
        assert_eq!(free_subgroup_rank(&[w("1"), w("a0 A0")]), 0);
    }
}
