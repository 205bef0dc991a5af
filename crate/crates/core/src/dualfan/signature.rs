//! Canonical forms of finite posets with integer labels, by color
//! refinement and exhaustive individualization.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

/// A finite poset given by its strict order relation, with a label on each
/// element (for face posets, the dimension).
#[derive(Clone, Debug, Default)]
pub struct LabeledPoset {
    pub labels: Vec<usize>,
    /// `below[x]` lists the elements covered by `x`.
    pub below: Vec<Vec<usize>>,
}

impl LabeledPoset {
    /// Poset of the given sets under strict inclusion.
    pub fn from_sets(sets: &[Vec<usize>], labels: Vec<usize>) -> Self {
        let less =
            |a: usize, b: usize| sets[a].len() < sets[b].len() && is_subset(&sets[a], &sets[b]);
        Self {
            below: covers(sets.len(), less),
            labels,
        }
    }

    /// The same sets ordered by reverse inclusion.
    pub fn from_sets_reversed(sets: &[Vec<usize>], labels: Vec<usize>) -> Self {
        let less =
            |a: usize, b: usize| sets[b].len() < sets[a].len() && is_subset(&sets[b], &sets[a]);
        Self {
            below: covers(sets.len(), less),
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn above(&self) -> Vec<Vec<usize>> {
        let mut above = vec![Vec::new(); self.len()];
        for (x, bs) in self.below.iter().enumerate() {
            for &y in bs {
                above[y].push(x);
            }
        }
        above
    }
}

/// Covering relation of a strict order on `0..n`.
fn covers(n: usize, less: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let strictly_below: Vec<Vec<usize>> = (0..n)
        .map(|b| (0..n).filter(|&a| less(a, b)).collect())
        .collect();
    strictly_below
        .iter()
        .map(|bs| {
            bs.iter()
                .copied()
                .filter(|&a| !bs.iter().any(|&c| c != a && less(a, c)))
                .collect()
        })
        .collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Canonical string of a labeled poset: equal strings iff isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(pub String);

impl Signature {
    /// Short hex digest for reports.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.0.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_form(poset: &LabeledPoset) -> Signature {
    let above = poset.above();
    let init = rank_by(&poset.labels);
    let colors = refine(poset, &above, init);
    let mut state = SearchState::default();
    search(poset, &above, colors, &mut Vec::new(), &mut state);
    Signature(state.best.map(|(cert, _)| cert).unwrap_or_default())
}

#[derive(Default)]
struct SearchState {
    /// Smallest certificate so far and the leaf coloring that produced it.
    best: Option<(String, Vec<usize>)>,
    /// Automorphisms found by comparing equal leaves.
    automorphisms: Vec<Vec<usize>>,
}

/// Ranks of `keys` in sorted order (equal keys share a rank).
fn rank_by<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("present"))
        .collect()
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

fn refine(poset: &LabeledPoset, above: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..poset.len())
            .map(|x| {
                let mut down: Vec<usize> = poset.below[x].iter().map(|&y| colors[y]).collect();
                let mut up: Vec<usize> = above[x].iter().map(|&y| colors[y]).collect();
                down.sort_unstable();
                up.sort_unstable();
                (colors[x], down, up)
            })
            .collect();
        let next = rank_by(&keys);
        if class_count(&next) == class_count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Orbit representatives under the found automorphisms that fix `prefix`.
fn orbits(n: usize, automorphisms: &[Vec<usize>], prefix: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for sigma in automorphisms
        .iter()
        .filter(|s| prefix.iter().all(|&p| s[p] == p))
    {
        for (x, &y) in sigma.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

fn search(
    poset: &LabeledPoset,
    above: &[Vec<usize>],
    colors: Vec<usize>,
    prefix: &mut Vec<usize>,
    state: &mut SearchState,
) {
    let n = poset.len();
    if class_count(&colors) == n {
        let cert = certificate(poset, &colors);
        match &state.best {
            Some((b, leaf)) if *b == cert => {
                let mut by_color = vec![0; n];
                for (x, &c) in leaf.iter().enumerate() {
                    by_color[c] = x;
                }
                let sigma: Vec<usize> = colors.iter().map(|&c| by_color[c]).collect();
                if sigma.iter().enumerate().any(|(x, &y)| x != y) {
                    state.automorphisms.push(sigma);
                }
            }
            Some((b, _)) if *b < cert => {}
            _ => state.best = Some((cert, colors)),
        }
        return;
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &colors {
        *sizes.entry(c).or_default() += 1;
    }
    let target = *sizes
        .iter()
        .find(|(_, &s)| s > 1)
        .map(|(c, _)| c)
        .expect("non-discrete coloring has a split class");
    let mut explored: Vec<usize> = Vec::new();
    for x in (0..n).filter(|&x| colors[x] == target) {
        if !explored.is_empty() {
            let orbit = orbits(n, &state.automorphisms, prefix);
            if explored.iter().any(|&y| orbit[y] == orbit[x]) {
                continue;
            }
        }
        let split: Vec<(usize, usize)> = (0..n)
            .map(|y| (colors[y], usize::from(y != x || colors[y] != target)))
            .collect();
        let next = refine(poset, above, rank_by(&split));
        prefix.push(x);
        search(poset, above, next, prefix, state);
        prefix.pop();
        explored.push(x);
    }
}

fn certificate(poset: &LabeledPoset, colors: &[usize]) -> String {
    let mut order = vec![0; colors.len()];
    for (x, &c) in colors.iter().enumerate() {
        order[c] = x;
    }
    let parts: Vec<String> = order
        .iter()
        .map(|&x| {
            let mut down: Vec<usize> = poset.below[x].iter().map(|&y| colors[y]).collect();
            down.sort_unstable();
            let down: Vec<String> = down.iter().map(usize::to_string).collect();
            format!("{}<{}>", poset.labels[x], down.join(","))
        })
        .collect();
    parts.join(";")
}
