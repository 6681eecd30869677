//! Diagram shapes and their canonical form under vertex and generator relabeling.

use crate::diagrams::ModuleDiagram;

/// Marker for "no edge".
pub const NONE: u8 = u8::MAX;

/// A diagram without names: `targets[k * n + v]` is the image of vertex `v`
/// under generator `k`, or [`NONE`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub n: u8,
    pub g: u8,
    pub targets: Vec<u8>,
}

impl Shape {
    pub fn empty(g: usize, n: usize) -> Self {
        Shape {
            n: n as u8,
            g: g as u8,
            targets: vec![NONE; g * n],
        }
    }

    #[inline]
    pub fn target(&self, k: usize, v: usize) -> u8 {
        self.targets[k * self.n as usize + v]
    }

    pub fn from_diagram(d: &ModuleDiagram) -> Self {
        let mut s = Shape::empty(d.generators().len(), d.vertices().len());
        let n = d.vertices().len();
        for e in d.edges() {
            s.targets[e.generator * n + e.source] = e.target as u8;
        }
        s
    }

    /// Whether every pair of generators commutes at vertex `v`.
    pub fn commutes_at(&self, v: usize) -> bool {
        let g = self.g as usize;
        let apply = |k: usize, x: u8| {
            if x == NONE {
                NONE
            } else {
                self.target(k, x as usize)
            }
        };
        for k in 0..g {
            for l in k + 1..g {
                if apply(k, self.target(l, v)) != apply(l, self.target(k, v)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn commutes(&self) -> bool {
        (0..self.n as usize).all(|v| self.commutes_at(v))
    }

    /// Relabels vertices by `pos` (old index to new index) and generators by
    /// `order` (new index to old index).
    pub fn relabel(&self, pos: &[u8], order: &[usize]) -> Shape {
        let n = self.n as usize;
        let mut out = Shape::empty(self.g as usize, n);
        for (new_k, &old_k) in order.iter().enumerate() {
            for v in 0..n {
                let t = self.target(old_k, v);
                out.targets[new_k * n + pos[v] as usize] =
                    if t == NONE { NONE } else { pos[t as usize] };
            }
        }
        out
    }

    /// Compact text: one character per slot, `.` for no edge.
    pub fn encode(&self) -> String {
        let digits = b"0123456789abcdefghijklmnopqrstuvwxyz";
        let mut s = format!("{}:{}:", self.g, self.n);
        s.extend(self.targets.iter().map(|&t| {
            if t == NONE {
                '.'
            } else {
                digits[t as usize] as char
            }
        }));
        s
    }

    pub fn decode(text: &str) -> Option<Shape> {
        let mut parts = text.splitn(3, ':');
        let g: usize = parts.next()?.parse().ok()?;
        let n: usize = parts.next()?.parse().ok()?;
        let body = parts.next()?;
        if body.len() != g * n {
            return None;
        }
        let targets = body
            .chars()
            .map(|c| {
                if c == '.' {
                    Some(NONE)
                } else {
                    c.to_digit(36)
                        .map(|d| d as u8)
                        .filter(|&d| (d as usize) < n)
                }
            })
            .collect::<Option<Vec<u8>>>()?;
        Some(Shape {
            n: n as u8,
            g: g as u8,
            targets,
        })
    }

    /// A named diagram with generators `a, b, c, ...` and vertices `v0, v1, ...`.
    pub fn to_diagram(&self, field: crate::exactlin::FieldSpec) -> ModuleDiagram {
        let g = self.g as usize;
        let n = self.n as usize;
        let gens: Vec<String> = (0..g)
            .map(|k| {
                if g <= 26 {
                    ((b'a' + k as u8) as char).to_string()
                } else {
                    format!("g{k}")
                }
            })
            .collect();
        let verts = (0..n).map(|v| format!("v{v}")).collect();
        let mut d = ModuleDiagram::new(field, gens, verts).expect("distinct names");
        for k in 0..g {
            for v in 0..n {
                let t = self.target(k, v);
                if t != NONE {
                    d.add_edge(k, v, t as usize)
                        .expect("shape is a valid diagram");
                }
            }
        }
        d
    }
}

/// Stable refinement: a vertex's new color records its old color, the colors
/// of its targets and the multiset of (generator, color) of its sources.
fn refine(s: &Shape, colors: &mut [u32]) {
    let n = s.n as usize;
    let g = s.g as usize;
    let mut cells = count_cells(colors);
    loop {
        let mut sigs: Vec<(Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut sig = Vec::with_capacity(1 + g + 2 * n);
                sig.push(colors[v]);
                for k in 0..g {
                    let t = s.target(k, v);
                    sig.push(if t == NONE {
                        u32::MAX
                    } else {
                        colors[t as usize]
                    });
                }
                let mut incoming: Vec<(u32, u32)> = Vec::new();
                for k in 0..g {
                    for (u, &cu) in colors.iter().enumerate().take(n) {
                        if s.target(k, u) as usize == v {
                            incoming.push((k as u32, cu));
                        }
                    }
                }
                incoming.sort_unstable();
                for (k, c) in incoming {
                    sig.push(k);
                    sig.push(c);
                }
                (sig, v)
            })
            .collect();
        sigs.sort();
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                rank += 1;
            }
            colors[sigs[i].1] = rank;
        }
        let now = rank as usize + 1;
        if now == cells {
            return;
        }
        cells = now;
    }
}

fn count_cells(colors: &[u32]) -> usize {
    let mut c: Vec<u32> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(s: &Shape, colors: Vec<u32>, order: &[usize], best: &mut Option<Shape>) {
    let n = s.n as usize;
    // First non-singleton cell by color.
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
        let pos: Vec<u8> = colors.iter().map(|&c| c as u8).collect();
        let cand = s.relabel(&pos, order);
        if best.as_ref().is_none_or(|b| cand < *b) {
            *best = Some(cand);
        }
        return;
    };
    for v in 0..n {
        if colors[v] as usize != cell {
            continue;
        }
        let mut next: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| 2 * c + u32::from(w != v))
            .collect();
        refine(s, &mut next);
        search(s, next, order, best);
    }
}

fn permutations(g: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..g).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Canonical representative: the lexicographically smallest relabeling over
/// all generator orders and all leaves of the individualization tree.
pub fn canonical(s: &Shape) -> Shape {
    let g = s.g as usize;
    let n = s.n as usize;
    let mut best: Option<Shape> = None;
    for order in permutations(g) {
        // Generators in the new order, then refine with every vertex alike.
        let view = s.relabel(&(0..n as u8).collect::<Vec<_>>(), &order);
        let mut colors = vec![0u32; n];
        refine(&view, &mut colors);
        let ident: Vec<usize> = (0..g).collect();
        search(&view, colors, &ident, &mut best);
    }
    best.unwrap_or_else(|| s.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(g: usize, n: usize, edges: &[(usize, usize, usize)]) -> Shape {
        let mut s = Shape::empty(g, n);
        for &(k, v, t) in edges {
            s.targets[k * n + v] = t as u8;
        }
        s
    }

    #[test]
    fn relabelings_share_a_canonical_form() {
        let a = shape(2, 4, &[(0, 0, 2), (1, 1, 2), (0, 1, 3)]);
        let b = shape(2, 4, &[(1, 3, 0), (0, 2, 0), (1, 2, 1)]);
        assert_eq!(canonical(&a), canonical(&b));
        let c = shape(2, 4, &[(0, 0, 2), (0, 1, 2), (1, 1, 3)]);
        assert_ne!(canonical(&a), canonical(&c));
    }

    #[test]
    fn encoding_round_trips() {
        let a = shape(3, 5, &[(0, 0, 2), (2, 4, 1)]);
        assert_eq!(Shape::decode(&a.encode()), Some(a));
        assert_eq!(Shape::decode("1:2:9."), None);
    }
}
